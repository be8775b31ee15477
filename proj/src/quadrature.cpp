#include "semilab/quadrature.hpp"

#include <cmath>
#include <numbers>

namespace semilab {

QuadratureResult tanh_sinh(const std::function<double(double)>& f, double a, double b, double rel_tol,
                           int max_level) {
  QuadratureResult out;
  if (a == b) {
    out.converged = true;
    return out;
  }
  const double half = 0.5 * (b - a);
  constexpr double pi_2 = std::numbers::pi / 2.0;
  constexpr double t_max = 6.5;

  auto add = [&](double v, double w, double& sum) {
    ++out.evaluations;
    if (std::isfinite(v)) sum += w * v;
  };

  // Sum over nodes t = k*step for the k selected by `odd_only`.
  auto level_sum = [&](double step, bool odd_only) {
    double sum = 0.0;
    for (int k = 1;; ++k) {
      if (odd_only && k % 2 == 0) continue;
      const double t = k * step;
      if (t > t_max) break;
      const double u = pi_2 * std::sinh(t);
      const double e = std::exp(-2.0 * u);
      // Distance of the node from the nearer endpoint, and its weight.
      const double dist = 2.0 * half * e / (1.0 + e);
      if (dist == 0.0) break;
      const double w = half * pi_2 * std::cosh(t) * 4.0 * e / ((1.0 + e) * (1.0 + e));
      if (w == 0.0) break;
      add(f(a + dist), w, sum);
      add(f(b - dist), w, sum);
    }
    return sum;
  };

  double step = 1.0;
  double sum = 0.0;
  add(f(a + half), half * pi_2, sum);
  sum += level_sum(step, false);
  double estimate = step * sum;
  for (int level = 1; level <= max_level; ++level) {
    step *= 0.5;
    sum += level_sum(step, true);
    const double next = step * sum;
    out.error_estimate = std::abs(next - estimate);
    estimate = next;
    if (level >= 3 && out.error_estimate <= rel_tol * std::abs(estimate)) {
      out.converged = true;
      break;
    }
  }
  out.value = estimate;
  return out;
}

double bisect_increasing(const std::function<double(double)>& f, double target, double lo, double hi,
                         double rel_tol, double abs_tol, int max_iter) {
  for (int i = 0; i < max_iter; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (hi - lo <= std::max(abs_tol, rel_tol * std::abs(mid))) break;
    if (f(mid) < target)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace semilab
