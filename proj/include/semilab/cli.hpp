#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace semilab {

/// Exit statuses of `run`.
enum ExitStatus : int {
  exit_ok = 0,
  exit_internal = 1,
  exit_precondition = 2,
  exit_nonconvergence = 3,
};

struct RunOptions {
  std::filesystem::path config;
  /// Overrides the config's `output` entry when set.
  std::optional<std::filesystem::path> out;
  std::optional<std::uint64_t> seed;
  std::optional<double> tol;
};

const std::vector<std::string>& command_names();

/// Runs one experiment. Always writes <out>/report.json; field dumps and
/// plot.gp are written only on success.
int run(const std::string& command, const RunOptions& options);

}  // namespace semilab
