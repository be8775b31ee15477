#pragma once

#include "semilab/geometry.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <functional>
#include <string>

namespace semilab {

/// Continuum box (0,e_1)x...x(0,e_N) or ball B(0,r) for path simulation.
class ContinuumShape {
 public:
  static ContinuumShape box(std::vector<double> extents);
  static ContinuumShape ball(double radius, int dimension);
  /// The continuum shape a grid domain was cut from (box, slab or ball).
  static ContinuumShape from_domain(const GridDomain& domain);

  int dimension() const { return dim_; }
  bool contains(const Eigen::VectorXd& x) const;
  /// Distance to the boundary for x inside (negative outside for the ball).
  double distance(const Eigen::VectorXd& x) const;
  /// Closest point of the boundary.
  Eigen::VectorXd project(const Eigen::VectorXd& x) const;

 private:
  ContinuumShape() = default;
  bool is_ball_ = false;
  int dim_ = 0;
  double radius_ = 0.0;
  std::vector<double> extents_;
};

using PointFunction = std::function<double(const Eigen::VectorXd&)>;

/// Monte Carlo estimate. stderr_ is the sample standard deviation over √paths.
struct MCEstimate {
  double mean = 0.0;
  double stderr_ = 0.0;
  std::int64_t paths = 0;
  double step = 0.0;
  std::uint64_t seed = 0;
  /// Paths dropped for exceeding the jump budget (walk-on-spheres only).
  std::int64_t excluded = 0;
  bool excluded_flag = false;
  /// The start point is closer to the boundary than √step.
  bool high_bias = false;
};

/// Seed of path `index` derived from the master seed (splitmix64).
std::uint64_t path_seed(std::uint64_t seed, std::uint64_t index);

/// E^x[f(X_τ)] by walk-on-spheres with an eps absorption shell.
MCEstimate wos_harmonic(const ContinuumShape& shape, const PointFunction& f, const Eigen::VectorXd& x,
                        std::int64_t paths, double eps, std::uint64_t seed);

/// E^x[f(X_τ) exp(-∫₀^τ q(X_s) ds)] with Euler–Maruyama Brownian paths
/// (generator Δ/2, per-coordinate increment variance = step).
MCEstimate feynman_kac_estimate(const ContinuumShape& shape, const PointFunction& q, const PointFunction& f,
                                const Eigen::VectorXd& x, std::int64_t paths, double step, std::uint64_t seed);

/// E^x[τ_D] from Euler–Maruyama paths.
MCEstimate exit_time_estimate(const ContinuumShape& shape, const Eigen::VectorXd& x, std::int64_t paths,
                              double step, std::uint64_t seed);

}  // namespace semilab
