#pragma once

#include "semilab/harmonic.hpp"
#include "semilab/phi.hpp"

#include <optional>
#include <string>
#include <vector>

namespace semilab {

enum class Regime { nondecreasing, nonincreasing };
enum class SolveMethod { trivial, picard, newton, schrodinger_fixed_point };
enum class InitialGuess { harmonic, zero };

std::string to_string(Regime r);
std::string to_string(SolveMethod m);

struct SolveOptions {
  double tol = 1e-10;
  int max_sweeps = 5000;
  /// Picard hands over to Newton when the bracket gap has not halved over
  /// this many consecutive sweeps.
  int stall_window = 50;
  int max_newton = 100;
  int max_fixed_point = 2000;
  InitialGuess start = InitialGuess::harmonic;
};

/// Result of a semilinear solve. `solution` is u = H_D^φ f and
/// `harmonic_part` is h = H_D f.
struct SolveReport {
  ScalarField solution;
  ScalarField harmonic_part;
  /// sup-norm of u + G_D φ(u) - h.
  double residual = 0.0;
  int iterations = 0;
  int newton_iterations = 0;
  double bracket_gap = 0.0;
  Regime regime = Regime::nondecreasing;
  SolveMethod method = SolveMethod::trivial;
  /// Nonincreasing regime: the gauge constant b of the order interval
  /// [e^{-b} h, h] and the Green bound c = sup G_D1 / h it was derived from.
  std::optional<double> gauge_b;
  std::optional<double> green_bound_c;
  std::vector<double> gap_trace;
};

/// Interleaved Picard iteration u ↦ clamp(h - G_D φ(u), 0, h) with a projected
/// Newton fallback. Consecutive iterates bracket the solution; the solve stops
/// when the bracket is narrower than tol.
SolveReport solve_semilinear_nondecreasing(const LaplaceSolver& solver, const PhiSpec& phi,
                                           const BoundaryData& f, const SolveOptions& options = {});

/// Fixed point of u ↦ v, (A + 2 diag(φ(u)/u)) v = C f, inside the order
/// interval [e^{-b} h, h]. Requires c = sup G_D1 / h ≤ 1 / (e φ(0)).
SolveReport solve_semilinear_nonincreasing(const LaplaceSolver& solver, const PhiSpec& phi,
                                           const BoundaryData& f, const SolveOptions& options = {});

/// Dispatches on the monotonicity of φ.
SolveReport solve_semilinear(const LaplaceSolver& solver, const PhiSpec& phi, const BoundaryData& f,
                             const SolveOptions& options = {});

/// ‖u + G_D φ(u) - h‖_∞ recomputed from the report's fields.
double verify_integral_identity(const LaplaceSolver& solver, const SolveReport& report, const PhiSpec& phi);

/// Solves with f1 ≤ f2 and checks u1 ≤ u2 + tol pointwise.
bool comparison_check(const LaplaceSolver& solver, const PhiSpec& phi, const BoundaryData& f1,
                      const BoundaryData& f2, double tol, const SolveOptions& options = {});

/// Smallest b ≥ 0 with b e^{-b} = level, for level in [0, 1/e].
double gauge_constant(double level);

/// κ = sup G_D φ(h) / h over nodes with h > 0.
double certificate_kappa(const LaplaceSolver& solver, const PhiSpec& phi, const Eigen::VectorXd& h);

/// Sublinear growth at infinity, φ(t)/t → 0: closed form for power kinds,
/// otherwise φ(t)/t sampled on a log grid over [1, 1e8].
bool is_sublinear_at_infinity(const PhiSpec& phi);

struct AlphaReport {
  double alpha = 0.0;
  /// sup G_D1 / h for h = H_D f.
  double green_bound_c = 0.0;
  double h_sup = 0.0;
  /// κ(α) = sup G_D φ(α h) / (α h) at the returned α (nondecreasing only).
  std::optional<double> kappa;
};

/// Smallest α with c φ(α‖h‖)/α < 1 (doubling/halving then bisection), and
/// the certificate κ(α) < 1 checked at that α.
AlphaReport alpha_threshold_nondecreasing(const LaplaceSolver& solver, const BoundaryData& f,
                                          const PhiSpec& phi);

/// α_f = e φ(0) sup G_D1 / h.
AlphaReport alpha_threshold_nonincreasing(const LaplaceSolver& solver, const BoundaryData& f,
                                          const PhiSpec& phi);

/// κ(α) = sup G_D φ(α h) / (α h).
double alpha_kappa(const LaplaceSolver& solver, const PhiSpec& phi, const Eigen::VectorXd& h, double alpha);

}  // namespace semilab
