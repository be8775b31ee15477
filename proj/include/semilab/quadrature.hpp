#pragma once

#include <functional>

namespace semilab {

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  int evaluations = 0;
  bool converged = false;
};

/// Double-exponential (tanh-sinh) quadrature on [a, b].
///
/// Nodes cluster doubly exponentially at both endpoints, so integrable
/// algebraic endpoint singularities are handled without special treatment.
/// Non-finite integrand values (underflow right at an endpoint) are dropped.
/// Levels are refined until successive estimates agree to rel_tol.
QuadratureResult tanh_sinh(const std::function<double(double)>& f, double a, double b,
                           double rel_tol = 1e-12, int max_level = 12);

/// Bisection for an increasing function: returns x in [lo, hi] with
/// f(x) ~ target, stopping when the bracket is below rel_tol * |x| (or
/// abs_tol).
double bisect_increasing(const std::function<double(double)>& f, double target, double lo, double hi,
                         double rel_tol = 1e-13, double abs_tol = 0.0, int max_iter = 400);

}  // namespace semilab
