#include "semilab/semilinear.hpp"

#include "semilab/errors.hpp"
#include "semilab/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace semilab {

std::string to_string(Regime r) { return r == Regime::nondecreasing ? "nondecreasing" : "nonincreasing"; }

std::string to_string(SolveMethod m) {
  switch (m) {
    case SolveMethod::trivial: return "trivial";
    case SolveMethod::picard: return "picard";
    case SolveMethod::newton: return "newton";
    case SolveMethod::schrodinger_fixed_point: return "schrodinger_fixed_point";
  }
  return "unknown";
}

namespace {

Eigen::VectorXd apply_phi(const PhiSpec& phi, const Eigen::VectorXd& u) {
  Eigen::VectorXd out(u.size());
  for (Index i = 0; i < u.size(); ++i) out(i) = eval_phi(phi, std::max(u(i), 0.0));
  return out;
}

Eigen::VectorXd apply_phi_derivative(const PhiSpec& phi, const Eigen::VectorXd& u) {
  Eigen::VectorXd out(u.size());
  for (Index i = 0; i < u.size(); ++i)
    out(i) = eval_phi_derivative(phi, std::max(u(i), std::numeric_limits<double>::min()));
  return out;
}

double identity_residual(const LaplaceSolver& solver, const PhiSpec& phi, const Eigen::VectorXd& u,
                         const Eigen::VectorXd& h) {
  return (u + green_apply(solver, apply_phi(phi, u)) - h).lpNorm<Eigen::Infinity>();
}

void check_boundary_data(const LaplaceSolver& solver, const BoundaryData& f) {
  if (f.values.size() != solver.domain().boundary_count())
    throw DomainError("boundary data does not belong to this domain");
}

// Projected Newton on F(u) = A u + 2 φ(u) - C f = 0 started from the
// supersolution h. For convex φ every iterate stays a supersolution and the
// sequence decreases; for concave φ the first step lands below the solution,
// the projection onto [0, h] keeps it a subsolution and the sequence
// increases. Nodes at u = 0 use φ' at the smallest positive double.
Eigen::VectorXd newton_solve(const LaplaceSolver& solver, const PhiSpec& phi, const Eigen::VectorXd& h,
                             const Eigen::VectorXd& rhs, const SolveOptions& options, SolveReport& report) {
  const auto& a = solver.op().matrix;
  Eigen::VectorXd u = h;
  double residual = identity_residual(solver, phi, u, h);
  double best = residual;
  int worse = 0;
  for (int it = 0; it < options.max_newton && residual > options.tol; ++it) {
    report.newton_iterations = it + 1;
    const Eigen::VectorXd g = a * u + 2.0 * apply_phi(phi, u) - rhs;
    const Eigen::VectorXd step = solver.solve_shifted(2.0 * apply_phi_derivative(phi, u).cwiseMax(0.0), g);
    u = (u - step).cwiseMax(0.0).cwiseMin(h);
    residual = identity_residual(solver, phi, u, h);
    if (residual < best) {
      best = residual;
      worse = 0;
    } else if (++worse >= 5) {
      break;
    }
  }
  if (residual <= options.tol) return u;
  throw NonconvergenceError("Newton iteration failed to reach tolerance; residual " + std::to_string(residual),
                            report.bracket_gap, residual);
}

}  // namespace

SolveReport solve_semilinear_nondecreasing(const LaplaceSolver& solver, const PhiSpec& phi,
                                           const BoundaryData& f, const SolveOptions& options) {
  if (!phi.is_nondecreasing()) throw DomainError("solve_semilinear_nondecreasing: phi is not nondecreasing");
  if (phi.kind() != PhiKind::zero && eval_phi(phi, 0.0) != 0.0)
    throw DomainError("solve_semilinear_nondecreasing: phi(0) must be 0");
  check_boundary_data(solver, f);
  SolveReport report;
  report.regime = Regime::nondecreasing;
  report.harmonic_part = harmonic_extension(solver, f);
  const Eigen::VectorXd& h = report.harmonic_part.values;

  if (f.trivial()) {
    report.solution = ScalarField::constant(solver.domain_ptr(), 0.0);
    report.method = SolveMethod::trivial;
    report.residual = identity_residual(solver, phi, report.solution.values, h);
    return report;
  }

  // x_{n+1} = clamp(h - G φ(x_n)); the map is antitone so consecutive
  // iterates lie on opposite sides of the solution.
  Eigen::VectorXd x = options.start == InitialGuess::harmonic ? h : Eigen::VectorXd::Zero(h.size()).eval();
  Eigen::VectorXd y;
  bool converged = false;
  for (int sweep = 0; sweep < options.max_sweeps; ++sweep) {
    y = (h - green_apply(solver, apply_phi(phi, x))).cwiseMax(0.0).cwiseMin(h);
    const double gap = (y - x).lpNorm<Eigen::Infinity>();
    report.gap_trace.push_back(gap);
    report.iterations = sweep + 1;
    report.bracket_gap = gap;
    if (gap < options.tol) {
      converged = true;
      break;
    }
    const auto n = report.gap_trace.size();
    const auto window = static_cast<std::size_t>(options.stall_window);
    if (n > window && gap > 0.5 * report.gap_trace[n - 1 - window]) break;
    x.swap(y);
  }

  report.method = SolveMethod::picard;
  if (converged) {
    report.residual = identity_residual(solver, phi, x, h);
    if (report.residual <= options.tol) {
      report.solution = ScalarField(solver.domain_ptr(), x);
      return report;
    }
  }
  Eigen::VectorXd u = newton_solve(solver, phi, h, solver.boundary_rhs(f), options, report);
  report.method = SolveMethod::newton;
  report.solution = ScalarField(solver.domain_ptr(), u);
  report.residual = identity_residual(solver, phi, u, h);
  return report;
}

double gauge_constant(double level) {
  if (!(level >= 0.0) || level > std::exp(-1.0) * (1.0 + 1e-15))
    throw DomainError("gauge_constant: level must lie in [0, 1/e]");
  if (level == 0.0) return 0.0;
  return bisect_increasing([](double b) { return b * std::exp(-b); }, level, 0.0, 1.0, 0.0, 1e-15);
}

SolveReport solve_semilinear_nonincreasing(const LaplaceSolver& solver, const PhiSpec& phi,
                                           const BoundaryData& f, const SolveOptions& options) {
  if (!phi.is_nonincreasing()) throw DomainError("solve_semilinear_nonincreasing: phi is not nonincreasing");
  check_boundary_data(solver, f);
  if (f.trivial()) throw DomainError("solve_semilinear_nonincreasing: boundary data must be nontrivial");
  SolveReport report;
  report.regime = Regime::nonincreasing;
  report.harmonic_part = harmonic_extension(solver, f);
  const Eigen::VectorXd& h = report.harmonic_part.values;

  const double phi0 = eval_phi(phi, 0.0);
  const double c = sup_green_ratio(solver, Eigen::VectorXd::Ones(h.size()), h);
  report.green_bound_c = c;
  if (phi0 == 0.0) {
    // Nonincreasing with φ(0) = 0 forces φ ≡ 0.
    report.solution = report.harmonic_part;
    report.method = SolveMethod::trivial;
    report.gauge_b = 0.0;
    report.residual = identity_residual(solver, phi, h, h);
    return report;
  }
  const double threshold = 1.0 / (std::numbers::e * phi0);
  if (c > threshold)
    throw PreconditionError("order-interval condition fails: sup G_D1/h = " + std::to_string(c) +
                                " exceeds 1/(e phi(0)) = " + std::to_string(threshold),
                            c, threshold);
  const double b = gauge_constant(phi0 * c);
  report.gauge_b = b;
  const Eigen::VectorXd lower = std::exp(-b) * h;
  const Eigen::VectorXd rhs = solver.boundary_rhs(f);

  Eigen::VectorXd u = h;
  for (int it = 0; it < options.max_fixed_point; ++it) {
    Eigen::VectorXd q(u.size());
    for (Index i = 0; i < u.size(); ++i) q(i) = u(i) > 0.0 ? eval_phi(phi, u(i)) / u(i) : 0.0;
    Eigen::VectorXd v = solver.solve_shifted(2.0 * q, rhs);
    const double below = (lower - v).maxCoeff();
    const double above = (v - h).maxCoeff();
    if (below > options.tol || above > options.tol)
      throw InvariantError("fixed-point iterate left the order interval [e^{-b} h, h]");
    v = v.cwiseMax(lower).cwiseMin(h);
    const double diff = (v - u).lpNorm<Eigen::Infinity>();
    report.gap_trace.push_back(diff);
    report.iterations = it + 1;
    report.bracket_gap = diff;
    u.swap(v);
    if (diff < options.tol) {
      report.residual = identity_residual(solver, phi, u, h);
      if (report.residual <= options.tol) {
        report.method = SolveMethod::schrodinger_fixed_point;
        report.solution = ScalarField(solver.domain_ptr(), u);
        return report;
      }
    }
  }
  const double residual = identity_residual(solver, phi, u, h);
  throw NonconvergenceError("order-interval fixed point did not converge", report.bracket_gap, residual);
}

SolveReport solve_semilinear(const LaplaceSolver& solver, const PhiSpec& phi, const BoundaryData& f,
                             const SolveOptions& options) {
  if (phi.is_nondecreasing()) return solve_semilinear_nondecreasing(solver, phi, f, options);
  return solve_semilinear_nonincreasing(solver, phi, f, options);
}

double verify_integral_identity(const LaplaceSolver& solver, const SolveReport& report, const PhiSpec& phi) {
  return identity_residual(solver, phi, report.solution.values, report.harmonic_part.values);
}

bool comparison_check(const LaplaceSolver& solver, const PhiSpec& phi, const BoundaryData& f1,
                      const BoundaryData& f2, double tol, const SolveOptions& options) {
  if (f1.values.size() != f2.values.size()) throw DomainError("comparison_check: boundary data size mismatch");
  if ((f1.values.array() > f2.values.array()).any()) throw DomainError("comparison_check: requires f1 <= f2");
  const auto r1 = solve_semilinear(solver, phi, f1, options);
  const auto r2 = solve_semilinear(solver, phi, f2, options);
  return (r1.solution.values.array() <= r2.solution.values.array() + tol).all();
}

double certificate_kappa(const LaplaceSolver& solver, const PhiSpec& phi, const Eigen::VectorXd& h) {
  return sup_green_ratio(solver, apply_phi(phi, h), h);
}

double alpha_kappa(const LaplaceSolver& solver, const PhiSpec& phi, const Eigen::VectorXd& h, double alpha) {
  return certificate_kappa(solver, phi, (alpha * h).eval());
}

bool is_sublinear_at_infinity(const PhiSpec& phi) {
  switch (phi.kind()) {
    case PhiKind::zero: return true;
    case PhiKind::power: return phi.parameter() < 1.0;
    default: break;
  }
  constexpr int n = 33;
  std::vector<double> ratio(n);
  for (int j = 0; j < n; ++j) {
    const double t = std::pow(10.0, 8.0 * j / (n - 1));
    ratio[static_cast<std::size_t>(j)] = eval_phi(phi, t) / t;
  }
  for (int j = n / 2; j + 1 < n; ++j)
    if (ratio[static_cast<std::size_t>(j + 1)] > ratio[static_cast<std::size_t>(j)]) return false;
  return ratio.back() <= 0.1 * ratio.front() || ratio.back() == 0.0;
}

AlphaReport alpha_threshold_nondecreasing(const LaplaceSolver& solver, const BoundaryData& f,
                                          const PhiSpec& phi) {
  if (!phi.is_nondecreasing()) throw DomainError("alpha_threshold_nondecreasing: phi is not nondecreasing");
  if (!is_sublinear_at_infinity(phi))
    throw UnsupportedError("alpha threshold needs phi(t)/t -> 0 as t -> inf; " + phi.describe() + " is not");
  check_boundary_data(solver, f);
  if (f.trivial()) throw DomainError("alpha threshold: boundary data must be nontrivial");
  const Eigen::VectorXd h = harmonic_extension(solver, f).values;
  AlphaReport out;
  out.h_sup = h.maxCoeff();
  out.green_bound_c = sup_green_ratio(solver, Eigen::VectorXd::Ones(h.size()), h);
  if (phi.kind() == PhiKind::zero) {
    out.kappa = 0.0;
    return out;
  }
  const double c = out.green_bound_c;
  const double hs = out.h_sup;
  auto holds = [&](double alpha) { return c * eval_phi(phi, alpha * hs) / alpha < 1.0; };

  double lo, hi;
  if (holds(1.0)) {
    hi = 1.0;
    int k = 0;
    while (holds(0.5 * hi) && k++ < 200) hi *= 0.5;
    lo = 0.5 * hi;
  } else {
    lo = 1.0;
    int k = 0;
    while (!holds(2.0 * lo)) {
      lo *= 2.0;
      if (++k > 1000) throw SolverError("alpha threshold: failed to bracket");
    }
    hi = 2.0 * lo;
  }
  for (int i = 0; i < 200 && hi - lo > 1e-12 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    (holds(mid) ? hi : lo) = mid;
  }
  out.alpha = hi;
  out.kappa = alpha_kappa(solver, phi, h, hi);
  if (!(*out.kappa < 1.0))
    throw InvariantError("alpha threshold: certificate kappa(alpha_f) >= 1 despite the sufficient condition");
  return out;
}

AlphaReport alpha_threshold_nonincreasing(const LaplaceSolver& solver, const BoundaryData& f,
                                          const PhiSpec& phi) {
  if (!phi.is_nonincreasing()) throw DomainError("alpha_threshold_nonincreasing: phi is not nonincreasing");
  check_boundary_data(solver, f);
  if (f.trivial()) throw DomainError("alpha threshold: boundary data must be nontrivial");
  const Eigen::VectorXd h = harmonic_extension(solver, f).values;
  AlphaReport out;
  out.h_sup = h.maxCoeff();
  out.green_bound_c = sup_green_ratio(solver, Eigen::VectorXd::Ones(h.size()), h);
  out.alpha = std::numbers::e * eval_phi(phi, 0.0) * out.green_bound_c;
  return out;
}

}  // namespace semilab
