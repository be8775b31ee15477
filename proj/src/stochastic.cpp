#include "semilab/stochastic.hpp"

#include "semilab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <thread>
#include <vector>

namespace semilab {

ContinuumShape ContinuumShape::box(std::vector<double> extents) {
  if (extents.empty()) throw DomainError("box shape needs extents");
  for (double e : extents)
    if (!(e > 0.0)) throw DomainError("box extents must be positive");
  ContinuumShape s;
  s.dim_ = static_cast<int>(extents.size());
  s.extents_ = std::move(extents);
  return s;
}

ContinuumShape ContinuumShape::ball(double radius, int dimension) {
  if (!(radius > 0.0) || dimension < 1) throw DomainError("ball shape needs radius > 0 and dimension >= 1");
  ContinuumShape s;
  s.is_ball_ = true;
  s.dim_ = dimension;
  s.radius_ = radius;
  return s;
}

ContinuumShape ContinuumShape::from_domain(const GridDomain& domain) {
  switch (domain.shape()) {
    case ShapeTag::ball: return ball(domain.params().radius, domain.dimension());
    case ShapeTag::box:
    case ShapeTag::slab: return box(domain.params().extents);
    case ShapeTag::masked: break;
  }
  throw UnsupportedError("path simulation supports box, slab and ball shapes only");
}

bool ContinuumShape::contains(const Eigen::VectorXd& x) const { return distance(x) > 0.0; }

double ContinuumShape::distance(const Eigen::VectorXd& x) const {
  if (is_ball_) return radius_ - x.norm();
  double d = std::numeric_limits<double>::infinity();
  for (int k = 0; k < dim_; ++k) d = std::min({d, x(k), extents_[static_cast<std::size_t>(k)] - x(k)});
  return d;
}

Eigen::VectorXd ContinuumShape::project(const Eigen::VectorXd& x) const {
  if (is_ball_) {
    const double r = x.norm();
    if (r == 0.0) {
      Eigen::VectorXd p = Eigen::VectorXd::Zero(dim_);
      p(0) = radius_;
      return p;
    }
    return x * (radius_ / r);
  }
  Eigen::VectorXd p = x;
  for (int k = 0; k < dim_; ++k) p(k) = std::clamp(p(k), 0.0, extents_[static_cast<std::size_t>(k)]);
  if (!contains(p)) return p;  // already on (or clamped onto) the boundary
  int best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  bool upper = false;
  for (int k = 0; k < dim_; ++k) {
    const double e = extents_[static_cast<std::size_t>(k)];
    if (p(k) < best_d) best_d = p(k), best = k, upper = false;
    if (e - p(k) < best_d) best_d = e - p(k), best = k, upper = true;
  }
  p(best) = upper ? extents_[static_cast<std::size_t>(best)] : 0.0;
  return p;
}

std::uint64_t path_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

namespace {

using Rng = std::mt19937_64;
constexpr double excluded_marker = std::numeric_limits<double>::quiet_NaN();

// Runs one scoring function per path on its own substream. Scores land in
// path order, so the reduction does not depend on the thread count.
template <class PathFn>
MCEstimate run_paths(std::int64_t paths, std::uint64_t seed, PathFn&& path_fn) {
  if (paths < 1) throw DomainError("Monte Carlo estimate needs at least one path");
  std::vector<double> scores(static_cast<std::size_t>(paths));
  const auto workers = static_cast<std::int64_t>(std::max(1u, std::thread::hardware_concurrency()));
  const std::int64_t chunk = (paths + workers - 1) / workers;
  {
    std::vector<std::jthread> pool;
    for (std::int64_t w = 0; w < workers; ++w) {
      const std::int64_t begin = w * chunk;
      const std::int64_t end = std::min(paths, begin + chunk);
      if (begin >= end) break;
      pool.emplace_back([&, begin, end] {
        for (std::int64_t i = begin; i < end; ++i) {
          Rng rng(path_seed(seed, static_cast<std::uint64_t>(i)));
          scores[static_cast<std::size_t>(i)] = path_fn(rng);
        }
      });
    }
  }
  MCEstimate est;
  est.paths = paths;
  est.seed = seed;
  double sum = 0.0;
  std::int64_t used = 0;
  for (double s : scores) {
    if (std::isnan(s)) {
      ++est.excluded;
      continue;
    }
    sum += s;
    ++used;
  }
  if (used == 0) throw SolverError("every Monte Carlo path was excluded");
  est.mean = sum / static_cast<double>(used);
  double ss = 0.0;
  for (double s : scores)
    if (!std::isnan(s)) ss += (s - est.mean) * (s - est.mean);
  const double var = used > 1 ? ss / static_cast<double>(used - 1) : 0.0;
  est.stderr_ = std::sqrt(var / static_cast<double>(used));
  est.excluded_flag = est.excluded > 0 && static_cast<double>(est.excluded) > 1e-4 * static_cast<double>(paths);
  return est;
}

void check_start(const ContinuumShape& shape, const Eigen::VectorXd& x) {
  if (x.size() != shape.dimension()) throw DomainError("start point has wrong dimension");
  if (!shape.contains(x)) throw DomainError("start point must lie inside the shape");
}

Eigen::VectorXd uniform_direction(Rng& rng, int dim) {
  std::normal_distribution<double> normal;
  Eigen::VectorXd v(dim);
  double n2 = 0.0;
  do {
    for (int k = 0; k < dim; ++k) v(k) = normal(rng);
    n2 = v.squaredNorm();
  } while (n2 == 0.0);
  return v / std::sqrt(n2);
}

}  // namespace

MCEstimate wos_harmonic(const ContinuumShape& shape, const PointFunction& f, const Eigen::VectorXd& x,
                        std::int64_t paths, double eps, std::uint64_t seed) {
  check_start(shape, x);
  if (!(eps > 0.0)) throw DomainError("walk-on-spheres needs eps > 0");
  constexpr int max_jumps = 1000000;
  const int dim = shape.dimension();
  return run_paths(paths, seed, [&](Rng& rng) {
    Eigen::VectorXd p = x;
    for (int j = 0; j < max_jumps; ++j) {
      const double d = shape.distance(p);
      if (d < eps) return f(shape.project(p));
      p += d * uniform_direction(rng, dim);
    }
    return excluded_marker;
  });
}

MCEstimate feynman_kac_estimate(const ContinuumShape& shape, const PointFunction& q, const PointFunction& f,
                                const Eigen::VectorXd& x, std::int64_t paths, double step, std::uint64_t seed) {
  check_start(shape, x);
  if (!(step > 0.0)) throw DomainError("Euler step must be positive");
  const int dim = shape.dimension();
  const double sd = std::sqrt(step);
  auto est = run_paths(paths, seed, [&](Rng& rng) {
    std::normal_distribution<double> normal;
    Eigen::VectorXd p = x;
    double killing = 0.0;
    while (shape.contains(p)) {
      killing += q(p) * step;
      for (int k = 0; k < dim; ++k) p(k) += sd * normal(rng);
    }
    return f(shape.project(p)) * std::exp(-killing);
  });
  est.step = step;
  est.high_bias = shape.distance(x) < sd;
  return est;
}

MCEstimate exit_time_estimate(const ContinuumShape& shape, const Eigen::VectorXd& x, std::int64_t paths,
                              double step, std::uint64_t seed) {
  check_start(shape, x);
  if (!(step > 0.0)) throw DomainError("Euler step must be positive");
  const int dim = shape.dimension();
  const double sd = std::sqrt(step);
  auto est = run_paths(paths, seed, [&](Rng& rng) {
    std::normal_distribution<double> normal;
    Eigen::VectorXd p = x;
    std::int64_t steps = 0;
    while (shape.contains(p)) {
      for (int k = 0; k < dim; ++k) p(k) += sd * normal(rng);
      ++steps;
    }
    return static_cast<double>(steps) * step;
  });
  est.step = step;
  est.high_bias = shape.distance(x) < sd;
  return est;
}

}  // namespace semilab
