#pragma once

#include "semilab/semilinear.hpp"

#include <optional>
#include <string>
#include <vector>

namespace semilab {

struct ProbeSample {
  double distance = 0.0;
  double ratio = 0.0;
  Eigen::VectorXd point;
};

/// Pointwise comparison of u = H_D^φ f with h = H_D f.
struct RatioReport {
  ScalarField ratio;
  double sup_ratio = 0.0;
  double inf_ratio = 0.0;
  /// Certificate κ = sup G_D φ(h) / h and the lower bound 1 - κ it implies.
  std::optional<double> kappa;
  std::optional<double> certified_lower;
  bool inconclusive = false;
  std::vector<ProbeSample> probe_trace;
  std::vector<std::string> warnings;
};

/// u/h at every interior node. Throws DomainError if h vanishes somewhere.
RatioReport ratio_field(const ScalarField& u, const ScalarField& h);

/// κ = sup G_D φ(h)/h. When κ < 1, u ≥ (1 - κ) h; the report also carries the
/// ratio field of the actual solve so the bound can be checked. κ ≥ 1 only
/// marks the result inconclusive.
RatioReport proportionality_certificate(const LaplaceSolver& solver, const BoundaryData& f, const PhiSpec& phi,
                                        const SolveOptions& options = {});

/// Samples u/h at the nodes located `scales[k]` away from a boundary point
/// along the inward normal. Scales must decrease and be at least 2 spacings;
/// samples that do not land on an interior node are skipped with a warning.
RatioReport boundary_decay_probe(const LaplaceSolver& solver, const PhiSpec& phi, const BoundaryData& f,
                                 const Eigen::VectorXd& boundary_point, const std::vector<double>& scales,
                                 const SolveOptions& options = {});

struct GreenBound {
  /// sup G_D1 / h.
  double c = 0.0;
  /// inf h / δ over interior nodes.
  double inf_h_over_delta = 0.0;
};

GreenBound green_harmonic_bound(const LaplaceSolver& solver, const BoundaryData& f);

struct GreenSpreadReport {
  double sup_ratio = 0.0;
  double inf_ratio = 0.0;
  double spread = 0.0;
  Index pairs = 0;
  std::vector<Index> sources;
};

/// Discrete Green kernel columns at sampled sources divided by
/// min{|x-y|^{2-N}, δ(x)δ(y)/|x-y|^N} over pairs with |x - y| ≥ 4 spacings.
GreenSpreadReport zhao_estimate_check(const LaplaceSolver& solver, int sources = 8);

/// Discrete Green kernel G(x, y) for all x and a fixed source node y, scaled
/// so that Σ_y G(x,y) g(y) h^N = G_D g(x).
Eigen::VectorXd green_kernel_column(const LaplaceSolver& solver, Index source);

}  // namespace semilab
