#include "semilab/phi.hpp"

#include "semilab/errors.hpp"
#include "semilab/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace semilab {

namespace {
constexpr double inf = std::numeric_limits<double>::infinity();
constexpr double nan = std::numeric_limits<double>::quiet_NaN();
}  // namespace

std::string to_string(PhiKind kind) {
  switch (kind) {
    case PhiKind::power: return "power";
    case PhiKind::log1p: return "log1p";
    case PhiKind::exp_decay: return "exp_decay";
    case PhiKind::tabulated: return "tabulated";
    case PhiKind::zero: return "zero";
  }
  return "unknown";
}

std::string to_string(Monotonicity m) {
  return m == Monotonicity::nondecreasing ? "nondecreasing" : "nonincreasing";
}

std::string to_string(LimsupClass c) {
  return c == LimsupClass::finite_limsup ? "finite_limsup" : "infinite_limsup";
}

std::string to_string(IntegralClass c) {
  switch (c) {
    case IntegralClass::finite: return "finite";
    case IntegralClass::infinite: return "infinite";
    case IntegralClass::undetermined: return "undetermined";
  }
  return "unknown";
}

PhiSpec PhiSpec::power(double p) {
  if (!(p > 0.0) || !std::isfinite(p)) throw DomainError("power(p) needs a finite p > 0");
  PhiSpec s;
  s.kind_ = PhiKind::power;
  s.parameter_ = p;
  return s;
}

PhiSpec PhiSpec::log1p() {
  PhiSpec s;
  s.kind_ = PhiKind::log1p;
  return s;
}

PhiSpec PhiSpec::exp_decay(double phi0) {
  if (!(phi0 > 0.0) || !std::isfinite(phi0)) throw DomainError("exp_decay(phi0) needs a finite phi0 > 0");
  PhiSpec s;
  s.kind_ = PhiKind::exp_decay;
  s.parameter_ = phi0;
  s.monotonicity_ = Monotonicity::nonincreasing;
  s.zero_value_ = phi0;
  return s;
}

PhiSpec PhiSpec::zero() { return PhiSpec{}; }

PhiSpec PhiSpec::tabulated(std::vector<double> t, std::vector<double> values, Monotonicity monotonicity) {
  if (t.size() < 2 || t.size() != values.size())
    throw DomainError("tabulated phi needs at least two (t, phi) samples");
  if (t.front() != 0.0) throw DomainError("tabulated phi must start at t = 0");
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (!std::isfinite(t[i]) || !std::isfinite(values[i]) || values[i] < 0.0)
      throw DomainError("tabulated phi samples must be finite and nonnegative");
    if (i > 0 && !(t[i] > t[i - 1])) throw DomainError("tabulated phi abscissae must be strictly increasing");
    if (i > 0) {
      const bool ok = monotonicity == Monotonicity::nondecreasing ? values[i] >= values[i - 1]
                                                                  : values[i] <= values[i - 1];
      if (!ok) throw DomainError("tabulated phi samples violate the declared monotonicity");
    }
  }
  if (monotonicity == Monotonicity::nondecreasing && values.front() != 0.0)
    throw DomainError("nondecreasing phi must satisfy phi(0) = 0");
  PhiSpec s;
  s.kind_ = PhiKind::tabulated;
  s.monotonicity_ = monotonicity;
  s.zero_value_ = values.front();
  if (monotonicity == Monotonicity::nondecreasing && t.size() >= 3 && values[1] > 0.0 && values[2] > values[1]) {
    const double a = std::log(values[2] / values[1]) / std::log(t[2] / t[1]);
    if (std::isfinite(a) && a > 0.0) s.head_exponent_ = a;
  }
  s.table_t_ = std::move(t);
  s.table_values_ = std::move(values);
  return s;
}

std::string PhiSpec::describe() const {
  std::ostringstream os;
  os << to_string(kind_);
  if (kind_ == PhiKind::power || kind_ == PhiKind::exp_decay) os << '(' << parameter_ << ')';
  if (kind_ == PhiKind::tabulated) os << '[' << table_t_.size() << " samples]";
  return os.str();
}

double eval_phi(const PhiSpec& phi, double t) {
  if (!(t >= 0.0)) throw DomainError("eval_phi: t must be >= 0");
  switch (phi.kind()) {
    case PhiKind::power: return std::pow(t, phi.parameter());
    case PhiKind::log1p: return std::log1p(t);
    case PhiKind::exp_decay: return phi.parameter() * std::exp(-t);
    case PhiKind::zero: return 0.0;
    case PhiKind::tabulated: {
      const auto& ts = phi.table_t();
      const auto& vs = phi.table_values();
      if (t >= ts.back()) return vs.back();
      if (phi.head_exponent() > 0.0 && t < ts[1]) return vs[1] * std::pow(t / ts[1], phi.head_exponent());
      const auto it = std::upper_bound(ts.begin(), ts.end(), t);
      const auto i = static_cast<std::size_t>(it - ts.begin()) - 1;
      const double w = (t - ts[i]) / (ts[i + 1] - ts[i]);
      return vs[i] + w * (vs[i + 1] - vs[i]);
    }
  }
  return 0.0;
}

double eval_phi_derivative(const PhiSpec& phi, double t) {
  if (!(t >= 0.0)) throw DomainError("eval_phi_derivative: t must be >= 0");
  switch (phi.kind()) {
    case PhiKind::power: {
      const double p = phi.parameter();
      if (t == 0.0) return p < 1.0 ? inf : (p == 1.0 ? 1.0 : 0.0);
      return p * std::pow(t, p - 1.0);
    }
    case PhiKind::log1p: return 1.0 / (1.0 + t);
    case PhiKind::exp_decay: return -phi.parameter() * std::exp(-t);
    case PhiKind::zero: return 0.0;
    case PhiKind::tabulated: {
      const auto& ts = phi.table_t();
      const auto& vs = phi.table_values();
      if (t >= ts.back()) return 0.0;
      if (phi.head_exponent() > 0.0 && t < ts[1]) {
        const double a = phi.head_exponent();
        if (t == 0.0) return a < 1.0 ? inf : (a == 1.0 ? vs[1] / ts[1] : 0.0);
        return a * vs[1] / ts[1] * std::pow(t / ts[1], a - 1.0);
      }
      const auto i = static_cast<std::size_t>(std::upper_bound(ts.begin(), ts.end(), t) - ts.begin()) - 1;
      return (vs[i + 1] - vs[i]) / (ts[i + 1] - ts[i]);
    }
  }
  return 0.0;
}

double phi_primitive(const PhiSpec& phi, double s) {
  if (!(s >= 0.0)) throw DomainError("phi_primitive: s must be >= 0");
  switch (phi.kind()) {
    case PhiKind::power: {
      const double p = phi.parameter();
      return std::pow(s, p + 1.0) / (p + 1.0);
    }
    case PhiKind::log1p:
      if (s < 1e-4) return s * s * (0.5 - s * (1.0 / 6.0 - s / 12.0));
      return (1.0 + s) * std::log1p(s) - s;
    case PhiKind::exp_decay: return -phi.parameter() * std::expm1(-s);
    case PhiKind::zero: return 0.0;
    case PhiKind::tabulated: {
      const auto& ts = phi.table_t();
      const auto& vs = phi.table_values();
      double acc = 0.0;
      std::size_t first = 0;
      if (phi.head_exponent() > 0.0) {
        const double a = phi.head_exponent();
        const double hi = std::min(s, ts[1]);
        acc = vs[1] * ts[1] / (a + 1.0) * std::pow(hi / ts[1], a + 1.0);
        first = 1;
      }
      for (std::size_t i = first; i + 1 < ts.size(); ++i) {
        if (s <= ts[i]) return acc;
        const double hi = std::min(s, ts[i + 1]);
        acc += 0.5 * (vs[i] + eval_phi(phi, hi)) * (hi - ts[i]);
      }
      if (s > ts.back()) acc += vs.back() * (s - ts.back());
      return acc;
    }
  }
  return 0.0;
}

bool check_phi_invariants(const PhiSpec& phi) {
  if (phi.is_nondecreasing() && phi.kind() != PhiKind::zero && eval_phi(phi, 0.0) != 0.0) return false;
  if (eval_phi(phi, 0.0) != phi.zero_value()) return false;
  double prev = eval_phi(phi, 0.0);
  for (int i = 1; i <= 1000; ++i) {
    const double v = eval_phi(phi, 10.0 * i / 1000.0);
    if (!std::isfinite(v) || v < 0.0) return false;
    if (phi.monotonicity() == Monotonicity::nondecreasing ? v < prev : v > prev) return false;
    prev = v;
  }
  return true;
}

LimsupResult check_zero_limit_ratio(const PhiSpec& phi) {
  if (phi.kind() == PhiKind::zero) return {LimsupClass::finite_limsup, 0.0, true};
  if (!phi.is_nondecreasing())
    throw UnsupportedError("limsup classification applies to nondecreasing phi only");
  switch (phi.kind()) {
    case PhiKind::power: {
      const double p = phi.parameter();
      if (p < 1.0) return {LimsupClass::infinite_limsup, inf, true};
      return {LimsupClass::finite_limsup, p == 1.0 ? 1.0 : 0.0, true};
    }
    case PhiKind::log1p: return {LimsupClass::finite_limsup, 1.0, true};
    default: break;
  }
  // Sampled sup of φ(t)/t on a log grid over [1e-8, 1e-2]; a ratio that keeps
  // growing like t^{-a} (a > 0.05) toward 0 reads as divergent.
  constexpr int n = 61;
  double sup = 0.0;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int used = 0;
  for (int j = 0; j < n; ++j) {
    const double t = std::pow(10.0, -8.0 + 6.0 * j / (n - 1));
    const double r = eval_phi(phi, t) / t;
    sup = std::max(sup, r);
    if (r > 0.0) {
      const double x = std::log(t), y = std::log(r);
      sx += x, sy += y, sxx += x * x, sxy += x * y;
      ++used;
    }
  }
  double slope = 0.0;
  if (used >= 2) slope = (used * sxy - sx * sy) / (used * sxx - sx * sx);
  const auto cls = slope < -0.05 ? LimsupClass::infinite_limsup : LimsupClass::finite_limsup;
  return {cls, sup, false};
}

IntegralResult classify_integral_numeric(const PhiSpec& phi, double epsilon) {
  constexpr int levels = 48;
  constexpr int fit = 16;
  IntegralResult out;
  out.epsilon = epsilon;
  out.closed_form = false;
  out.value = nan;
  if (eval_phi(phi, epsilon * std::ldexp(1.0, -levels)) == 0.0) {
    out.classification = IntegralClass::infinite;
    out.vanishing = true;
    return out;
  }
  auto integrand = [&](double s) { return 1.0 / std::sqrt(phi_primitive(phi, s)); };
  std::vector<double> pieces(levels);
  for (int k = 0; k < levels; ++k) {
    const double hi = epsilon * std::ldexp(1.0, -k);
    pieces[static_cast<std::size_t>(k)] = tanh_sinh(integrand, 0.5 * hi, hi, 1e-12, 8).value;
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int k = levels - fit; k < levels; ++k) {
    const double x = std::log(epsilon * std::ldexp(1.0, -k));
    const double y = std::log(pieces[static_cast<std::size_t>(k)]);
    sx += x, sy += y, sxx += x * x, sxy += x * y;
  }
  out.slope = (fit * sxy - sx * sy) / (fit * sxx - sx * sx);
  if (out.slope >= 0.02) {
    out.classification = IntegralClass::finite;
    out.value = q_transform_numeric(phi, epsilon);
  } else if (out.slope <= 0.005) {
    out.classification = IntegralClass::infinite;
  } else {
    out.classification = IntegralClass::undetermined;
  }
  return out;
}

IntegralResult check_integral_condition(const PhiSpec& phi, double epsilon) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) throw DomainError("integral condition needs epsilon > 0");
  if (phi.kind() == PhiKind::zero) {
    IntegralResult out;
    out.epsilon = epsilon;
    out.value = nan;
    out.vanishing = true;
    return out;
  }
  if (!phi.is_nondecreasing())
    throw UnsupportedError("integral condition applies to nondecreasing phi only");
  if (phi.kind() == PhiKind::power) {
    IntegralResult out;
    out.epsilon = epsilon;
    const double p = phi.parameter();
    if (p < 1.0) {
      out.classification = IntegralClass::finite;
      out.value = q_transform(phi, epsilon);
    } else {
      out.classification = IntegralClass::infinite;
      out.value = nan;
    }
    return out;
  }
  return classify_integral_numeric(phi, epsilon);
}

double q_transform_numeric(const PhiSpec& phi, double t) {
  if (!(t >= 0.0) || !std::isfinite(t)) throw DomainError("q_transform: t must be finite and >= 0");
  if (t == 0.0) return 0.0;
  // Above δ: s = e^y turns the power-like endpoint behaviour into a smooth
  // exponential. Below δ: Φ(s) ≈ Φ(δ)(s/δ)^k with k fitted from Φ(δ/2).
  double delta = 1e-100 * t;
  while (phi_primitive(phi, 0.5 * delta) <= 0.0) {
    delta *= 1e10;
    if (delta >= t) return inf;
  }
  const double big = phi_primitive(phi, delta);
  const double k = std::log2(big / phi_primitive(phi, 0.5 * delta));
  if (!(k < 2.0)) return inf;
  const double tail = delta / std::sqrt(big) / (1.0 - 0.5 * k);
  auto integrand = [&](double y) {
    const double s = std::exp(y);
    return s / std::sqrt(phi_primitive(phi, s));
  };
  const auto r = tanh_sinh(integrand, std::log(delta), std::log(t), 1e-14, 12);
  return 0.5 * (tail + r.value);
}

double q_transform(const PhiSpec& phi, double t) {
  if (!(t >= 0.0) || !std::isfinite(t)) throw DomainError("q_transform: t must be finite and >= 0");
  if (phi.kind() == PhiKind::power) {
    const double p = phi.parameter();
    if (p >= 1.0) throw DomainError("q_transform: integral condition fails for power(p) with p >= 1");
    return std::sqrt(1.0 + p) / (1.0 - p) * std::pow(t, 0.5 * (1.0 - p));
  }
  if (t == 0.0) return 0.0;
  const auto cls = check_integral_condition(phi, 1.0);
  if (cls.classification != IntegralClass::finite)
    throw DomainError("q_transform: integral condition is " + to_string(cls.classification) + " for " +
                      phi.describe());
  return q_transform_numeric(phi, t);
}

double q_limit(const PhiSpec& phi) {
  // A nondecreasing, nontrivial φ has Φ(s) ≥ c (s - s0) for large s, so the
  // integrand decays no faster than s^{-1/2} and Q is unbounded.
  if (!phi.is_nondecreasing()) throw UnsupportedError("q_limit applies to nondecreasing phi only");
  return inf;
}

double r_inverse_numeric(const PhiSpec& phi, double x) {
  if (!(x >= 0.0)) throw DomainError("r_inverse: x must be >= 0");
  const double bar = q_limit(phi);
  if (!(x < bar)) throw DomainError("r_inverse: x must be below lim Q = " + std::to_string(bar));
  if (x == 0.0) return 0.0;
  double hi = 1.0;
  while (q_transform_numeric(phi, hi) < x) {
    hi *= 2.0;
    if (!std::isfinite(hi)) throw SolverError("r_inverse: failed to bracket Q^{-1}(x)");
  }
  while (hi > 1e-300 && q_transform_numeric(phi, 0.5 * hi) >= x) hi *= 0.5;
  const double lo = 0.5 * hi;
  return bisect_increasing([&](double t) { return q_transform_numeric(phi, t); }, x, lo, hi, 1e-13);
}

double r_inverse(const PhiSpec& phi, double x) {
  if (!(x >= 0.0)) throw DomainError("r_inverse: x must be >= 0");
  if (phi.kind() == PhiKind::power) {
    const double p = phi.parameter();
    if (p >= 1.0) throw DomainError("r_inverse: integral condition fails for power(p) with p >= 1");
    if (!std::isfinite(x)) throw DomainError("r_inverse: x must be below lim Q = inf");
    return std::pow((1.0 - p) * (1.0 - p) / (1.0 + p), 1.0 / (1.0 - p)) * std::pow(x, 2.0 / (1.0 - p));
  }
  const auto cls = check_integral_condition(phi, 1.0);
  if (cls.classification != IntegralClass::finite)
    throw DomainError("r_inverse: integral condition is " + to_string(cls.classification));
  return r_inverse_numeric(phi, x);
}

}  // namespace semilab
