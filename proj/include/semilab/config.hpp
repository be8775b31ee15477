#pragma once

#include "semilab/errors.hpp"
#include "semilab/fields.hpp"
#include "semilab/phi.hpp"
#include "semilab/stochastic.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace semilab {

/// Malformed or out-of-range experiment configuration.
class ConfigError : public DomainError {
 public:
  using DomainError::DomainError;
  const char* kind() const noexcept override { return "config_error"; }
};

struct DomainConfig {
  std::string shape;  // box | slab | ball | masked
  std::vector<double> extents;
  double radius = 0.0;
  int dimension = 0;
  double spacing = 0.0;
  std::vector<ExcludedBox> exclude;
};

struct PhiConfig {
  std::string kind;  // power | log1p | exp_decay | tabulated | zero
  double p = 0.0;
  double phi0 = 0.0;
  std::string path;
  Monotonicity monotonicity = Monotonicity::nondecreasing;
};

struct BoundaryConfig {
  std::string type;  // constant | coordinate | r_trace | tabulated
  double value = 0.0;
  int axis = 0;
  double scale = 1.0;
  double offset = 0.0;
  std::string path;
};

struct ParamsConfig {
  std::optional<double> tol;
  std::vector<double> scales;
  std::vector<double> boundary_point;
  std::vector<double> point;
  std::int64_t paths = 10000;
  std::optional<std::uint64_t> seed;
  double step = 1e-4;
  double eps = 1e-4;
  std::optional<double> epsilon;
  double potential = 0.0;
  int sources = 8;
  double spread_limit = 50.0;
  std::string start = "harmonic";
};

struct ExperimentConfig {
  std::optional<DomainConfig> domain;
  std::optional<PhiConfig> phi;
  std::optional<BoundaryConfig> boundary;
  ParamsConfig params;
  std::string output;
  /// Directory of the config file; relative data paths resolve against it.
  std::filesystem::path base_dir;
  nlohmann::json raw;
};

/// Validates and parses a configuration document. Unknown keys are rejected.
ExperimentConfig parse_config(const nlohmann::json& doc, const std::filesystem::path& base_dir = {});

/// Reads and parses a configuration file.
ExperimentConfig load_config(const std::filesystem::path& path);

GridDomain make_domain(const DomainConfig& cfg);
PhiSpec make_phi(const PhiConfig& cfg, const std::filesystem::path& base_dir);

/// Boundary function of position; `phi` is required for r_trace data.
PointFunction make_boundary_function(const BoundaryConfig& cfg, const PhiSpec* phi);

BoundaryData make_boundary_data(const BoundaryConfig& cfg, const DomainPtr& domain, const PhiSpec* phi,
                                const std::filesystem::path& base_dir);

/// Reads a numeric CSV (optional non-numeric header line) into columns.
std::vector<std::vector<double>> read_numeric_csv(const std::filesystem::path& path, std::size_t columns);

}  // namespace semilab
