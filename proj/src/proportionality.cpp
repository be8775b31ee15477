#include "semilab/proportionality.hpp"

#include "semilab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace semilab {

RatioReport ratio_field(const ScalarField& u, const ScalarField& h) {
  if (u.values.size() != h.values.size()) throw DomainError("ratio_field: size mismatch");
  if ((h.values.array() <= 0.0).any()) throw DomainError("ratio_field: harmonic part vanishes at an interior node");
  if ((u.values.array() < 0.0).any()) throw DomainError("ratio_field: solution must be nonnegative");
  RatioReport r;
  r.ratio = ScalarField(h.domain, u.values.cwiseQuotient(h.values));
  r.sup_ratio = r.ratio.values.maxCoeff();
  r.inf_ratio = r.ratio.values.minCoeff();
  return r;
}

RatioReport proportionality_certificate(const LaplaceSolver& solver, const BoundaryData& f, const PhiSpec& phi,
                                        const SolveOptions& options) {
  if (!phi.is_nondecreasing()) throw DomainError("proportionality_certificate: phi must be nondecreasing");
  if (f.trivial()) throw DomainError("proportionality_certificate: boundary data must be nontrivial");
  const auto solve = solve_semilinear_nondecreasing(solver, phi, f, options);
  RatioReport r = ratio_field(solve.solution, solve.harmonic_part);
  const double kappa = certificate_kappa(solver, phi, solve.harmonic_part.values);
  r.kappa = kappa;
  if (kappa < 1.0) {
    r.certified_lower = 1.0 - kappa;
  } else {
    r.inconclusive = true;
  }
  return r;
}

RatioReport boundary_decay_probe(const LaplaceSolver& solver, const PhiSpec& phi, const BoundaryData& f,
                                 const Eigen::VectorXd& boundary_point, const std::vector<double>& scales,
                                 const SolveOptions& options) {
  const auto& domain = solver.domain();
  const double spacing = domain.spacing();
  for (std::size_t k = 0; k < scales.size(); ++k) {
    if (scales[k] < 2.0 * spacing * (1.0 - 1e-12))
      throw DomainError("boundary_decay_probe: every scale must be at least 2 spacings");
    if (k > 0 && !(scales[k] < scales[k - 1])) throw DomainError("boundary_decay_probe: scales must decrease");
  }
  const Eigen::VectorXd normal = inward_normal(domain, boundary_point);
  const auto solve = solve_semilinear(solver, phi, f, options);
  RatioReport r = ratio_field(solve.solution, solve.harmonic_part);
  for (double d : scales) {
    const Eigen::VectorXd x = boundary_point + d * normal;
    const auto node = domain.nearest_interior(x, 1e-6 * spacing);
    if (!node) {
      r.warnings.push_back("probe point at distance " + format_double(d) + " is not an interior node; skipped");
      continue;
    }
    r.probe_trace.push_back({d, r.ratio.values(*node), x});
  }
  return r;
}

GreenBound green_harmonic_bound(const LaplaceSolver& solver, const BoundaryData& f) {
  if (f.trivial()) throw DomainError("green_harmonic_bound: boundary data must be nontrivial");
  const Eigen::VectorXd h = harmonic_extension(solver, f).values;
  GreenBound out;
  out.c = sup_green_ratio(solver, Eigen::VectorXd::Ones(h.size()), h);
  out.inf_h_over_delta = std::numeric_limits<double>::infinity();
  for (Index i = 0; i < h.size(); ++i)
    out.inf_h_over_delta = std::min(out.inf_h_over_delta, h(i) / boundary_distance(solver.domain(), i));
  return out;
}

Eigen::VectorXd green_kernel_column(const LaplaceSolver& solver, Index source) {
  if (source < 0 || source >= solver.size()) throw DomainError("green_kernel_column: source is not interior");
  Eigen::VectorXd unit = Eigen::VectorXd::Zero(solver.size());
  unit(source) = 1.0;
  const double volume = std::pow(solver.domain().spacing(), solver.domain().dimension());
  return green_apply(solver, unit) / volume;
}

GreenSpreadReport zhao_estimate_check(const LaplaceSolver& solver, int sources) {
  const auto& domain = solver.domain();
  const int n_dim = domain.dimension();
  if (n_dim < 3) throw UnsupportedError("zhao_estimate_check needs dimension >= 3");
  if (domain.shape() == ShapeTag::masked) throw UnsupportedError("zhao_estimate_check needs a ball or box domain");
  if (sources < 1) throw DomainError("zhao_estimate_check: need at least one source");
  const Index n = domain.interior_count();
  const double min_sep = 4.0 * domain.spacing();

  std::vector<double> delta(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) delta[static_cast<std::size_t>(i)] = boundary_distance(domain, i);

  GreenSpreadReport out;
  out.sup_ratio = 0.0;
  out.inf_ratio = std::numeric_limits<double>::infinity();
  // Evenly spread sources through the lexicographic order, offset to avoid
  // the first (boundary-adjacent) node.
  for (int s = 0; s < sources; ++s) {
    const Index y = std::min<Index>(n - 1, (2 * s + 1) * n / (2 * sources));
    out.sources.push_back(y);
    const Eigen::VectorXd column = green_kernel_column(solver, y);
    const Eigen::VectorXd py = domain.interior_point(y);
    for (Index x = 0; x < n; ++x) {
      const double r = (domain.interior_point(x) - py).norm();
      if (r < min_sep) continue;
      const double dx = delta[static_cast<std::size_t>(x)];
      const double dy = delta[static_cast<std::size_t>(y)];
      const double model = std::min(std::pow(r, 2 - n_dim), dx * dy / std::pow(r, n_dim));
      const double ratio = column(x) / model;
      out.sup_ratio = std::max(out.sup_ratio, ratio);
      out.inf_ratio = std::min(out.inf_ratio, ratio);
      ++out.pairs;
    }
  }
  out.spread = out.pairs > 0 ? out.sup_ratio / out.inf_ratio : std::numeric_limits<double>::quiet_NaN();
  return out;
}

}  // namespace semilab
