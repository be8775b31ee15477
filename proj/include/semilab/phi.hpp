#pragma once

#include <string>
#include <vector>

namespace semilab {

enum class PhiKind { power, log1p, exp_decay, tabulated, zero };
enum class Monotonicity { nondecreasing, nonincreasing };

std::string to_string(PhiKind kind);
std::string to_string(Monotonicity m);

/// The nonlinearity φ : [0,∞) → [0,∞) of Δu = 2φ(u).
///
/// Closed-form kinds carry one parameter: the exponent p of power(p) = t^p and
/// the amplitude φ₀ of exp_decay(φ₀) = φ₀ e^{-t}. Tabulated kinds interpolate
/// linearly between samples and hold the last value beyond the table; below
/// the first positive abscissa a nondecreasing table follows the power law
/// through its first two positive samples. The
/// zero kind (φ ≡ 0) is monotone both ways and reduces every problem to the
/// classical Dirichlet one.
class PhiSpec {
 public:
  static PhiSpec power(double p);
  static PhiSpec log1p();
  static PhiSpec exp_decay(double phi0);
  static PhiSpec tabulated(std::vector<double> t, std::vector<double> values, Monotonicity monotonicity);
  static PhiSpec zero();

  PhiKind kind() const { return kind_; }
  double parameter() const { return parameter_; }
  Monotonicity monotonicity() const { return monotonicity_; }
  double zero_value() const { return zero_value_; }
  const std::vector<double>& table_t() const { return table_t_; }
  const std::vector<double>& table_values() const { return table_values_; }
  /// Exponent a of the power-law head φ(t) = φ(t₁)(t/t₁)^a used below the
  /// first positive abscissa t₁ of a nondecreasing table; 0 when the head is
  /// linear.
  double head_exponent() const { return head_exponent_; }

  bool is_nondecreasing() const { return kind_ == PhiKind::zero || monotonicity_ == Monotonicity::nondecreasing; }
  bool is_nonincreasing() const { return kind_ == PhiKind::zero || monotonicity_ == Monotonicity::nonincreasing; }

  std::string describe() const;

 private:
  PhiSpec() = default;
  PhiKind kind_ = PhiKind::zero;
  double parameter_ = 0.0;
  Monotonicity monotonicity_ = Monotonicity::nondecreasing;
  double zero_value_ = 0.0;
  std::vector<double> table_t_;
  std::vector<double> table_values_;
  double head_exponent_ = 0.0;
};

/// φ(t); throws DomainError for t < 0.
double eval_phi(const PhiSpec& phi, double t);

/// Right derivative φ'(t) (may be +inf at t = 0 for power(p), p < 1).
double eval_phi_derivative(const PhiSpec& phi, double t);

/// Φ(s) = ∫₀ˢ φ(r) dr, in closed form for every kind.
double phi_primitive(const PhiSpec& phi, double s);

/// True when the stored invariants hold: finite nonnegative values and the
/// declared monotonicity on a 1000-point grid over [0, 10], φ(0) = 0 for
/// nondecreasing kinds.
bool check_phi_invariants(const PhiSpec& phi);

enum class LimsupClass { finite_limsup, infinite_limsup };
enum class IntegralClass { finite, infinite, undetermined };

std::string to_string(LimsupClass c);
std::string to_string(IntegralClass c);

/// Classification of limsup_{t→0} φ(t)/t.
struct LimsupResult {
  LimsupClass classification = LimsupClass::finite_limsup;
  double witness = 0.0;  // the limit (closed form) or the sampled sup
  bool closed_form = true;
};

LimsupResult check_zero_limit_ratio(const PhiSpec& phi);

/// Classification of ∫₀^ε (∫₀ˢ φ)^{-1/2} ds.
struct IntegralResult {
  IntegralClass classification = IntegralClass::infinite;
  double epsilon = 1.0;
  /// Q(ε), i.e. half the integral, when finite; NaN otherwise.
  double value = 0.0;
  /// φ vanishes on an initial interval, so the integrand is undefined there.
  bool vanishing = false;
  /// Fitted decay exponent of the dyadic pieces (numeric path only).
  double slope = 0.0;
  bool closed_form = true;
};

IntegralResult check_integral_condition(const PhiSpec& phi, double epsilon);

/// Numeric classification used for every non-power kind: the integral over
/// (ε 2^{-k-1}, ε 2^{-k}] is computed for k = 0..47, the pieces are fitted
/// as ~ (ε 2^{-k})^a on the deepest 16 levels, and a ≥ 0.02 reads as finite,
/// a ≤ 0.005 as infinite, anything in between as undetermined.
IntegralResult classify_integral_numeric(const PhiSpec& phi, double epsilon);

/// Q(t) = ½ ∫₀ᵗ (∫₀ˢ φ)^{-1/2} ds. Closed form for power(p), p < 1; numeric
/// otherwise. Throws DomainError when the integral condition is not finite.
double q_transform(const PhiSpec& phi, double t);

/// Quadrature route for Q (log variable plus a fitted power-law tail), any kind.
double q_transform_numeric(const PhiSpec& phi, double t);

/// lim_{t→∞} Q(t).
double q_limit(const PhiSpec& phi);

/// R = Q⁻¹. Closed form for power(p), p < 1; bracketed bisection on Q
/// otherwise (relative tolerance 1e-12).
double r_inverse(const PhiSpec& phi, double x);

/// Bisection route for R on the numeric Q, any kind.
double r_inverse_numeric(const PhiSpec& phi, double x);

}  // namespace semilab
