#include <doctest.h>

#include "semilab/errors.hpp"
#include "semilab/harmonic.hpp"

#include <cmath>
#include <random>

using namespace semilab;

namespace {

DomainPtr share(GridDomain d) { return std::make_shared<const GridDomain>(std::move(d)); }

double cosh_oracle(double x) { return std::cosh(std::sqrt(2.0) * (x - 0.5)) / std::cosh(std::sqrt(2.0) / 2.0); }

double ball_green_error(double spacing) {
  const LaplaceSolver solver(share(build_ball_domain(1.0, 3, spacing)));
  const auto w = green_one(solver);
  double err = 0.0;
  for (Index i = 0; i < w.size(); ++i) {
    const double r2 = solver.domain().interior_point(i).squaredNorm();
    err = std::max(err, std::abs(w[i] - (1.0 - r2) / 3.0));
  }
  return err;
}

}  // namespace

TEST_CASE("stencil entries") {
  const auto d = build_box_domain({1.0}, 0.25);
  const auto op = assemble_laplacian(d);
  const Eigen::MatrixXd a(op.matrix);
  for (int i = 0; i < 3; ++i) CHECK(a(i, i) == doctest::Approx(32.0));
  CHECK(a(0, 1) == doctest::Approx(-16.0));
  CHECK(a(1, 2) == doctest::Approx(-16.0));
  CHECK(a(0, 2) == 0.0);
}

TEST_CASE("constants and linear functions are discretely harmonic") {
  const auto d = build_box_domain({1.0, 1.0}, 0.125);
  const auto op = assemble_laplacian(d);
  Eigen::VectorXd ones = Eigen::VectorXd::Ones(d.interior_count());
  Eigen::VectorXd x1 = d.interior_points().row(0).transpose();
  const Eigen::VectorXd a1 = op.matrix * ones;
  const Eigen::VectorXd ax = op.matrix * x1;
  for (Index i = 0; i < d.interior_count(); ++i) {
    bool inner = true;
    for (const auto& l : d.links(i)) inner = inner && !l.boundary;
    if (!inner) continue;
    CHECK(std::abs(a1(i)) < 1e-9);
    CHECK(std::abs(ax(i)) < 1e-9);
  }
}

TEST_CASE("harmonic extension oracles") {
  const auto interval = share(build_box_domain({1.0}, 1.0 / 16));
  const LaplaceSolver s1(interval);
  const auto h = harmonic_extension(s1, BoundaryData::sample(interval, [](const Eigen::VectorXd& z) { return z(0); }));
  for (Index i = 0; i < h.size(); ++i) CHECK(std::abs(h[i] - interval->interior_point(i)(0)) < 1e-12);

  const auto ball = share(build_ball_domain(1.0, 3, 0.125));
  const LaplaceSolver s2(ball);
  const auto c = harmonic_extension(s2, BoundaryData::constant(ball, 2.5));
  CHECK((c.values.array() - 2.5).abs().maxCoeff() < 1e-10);
  const auto lin = harmonic_extension(s2, BoundaryData::sample(ball, [](const Eigen::VectorXd& z) { return z(0) + 1.0; }));
  for (Index i = 0; i < lin.size(); ++i) CHECK(std::abs(lin[i] - ball->interior_point(i)(0) - 1.0) < 1e-9);
}

TEST_CASE("green operator oracles") {
  const auto interval = share(build_box_domain({1.0}, 1.0 / 32));
  const LaplaceSolver solver(interval);
  const auto w = green_one(solver);
  for (Index i = 0; i < w.size(); ++i) {
    const double x = interval->interior_point(i)(0);
    CHECK(std::abs(w[i] - x * (1.0 - x)) < 1e-12);
  }
  const auto mid = interval->nearest_interior(Eigen::VectorXd::Constant(1, 0.5), 1e-12);
  CHECK(w[*mid] == doctest::Approx(0.25));
  CHECK(green_apply(solver, Eigen::VectorXd::Zero(w.size()).eval()).lpNorm<Eigen::Infinity>() == 0.0);

  const double s = 0.5;
  const LaplaceSolver single(build_box_domain({1.0}, s));
  REQUIRE(single.size() == 1);
  CHECK(green_one(single)[0] == doctest::Approx(s * s));
}

TEST_CASE("ball green function converges at second order") {
  const double coarse = ball_green_error(1.0 / 8);
  const double fine = ball_green_error(1.0 / 16);
  const double ratio = coarse / fine;
  MESSAGE("ball green sup-errors " << coarse << " -> " << fine << ", ratio " << ratio);
  CHECK(ratio >= 3.5);
  CHECK(ratio <= 4.5);
}

TEST_CASE("harmonic measure") {
  const auto interval = share(build_box_domain({1.0}, 0.25));
  const LaplaceSolver solver(interval);
  const auto mu = harmonic_measure_row(solver, 0);
  CHECK(mu.weights(0) == doctest::Approx(0.75));
  CHECK(mu.weights(1) == doctest::Approx(0.25));

  const auto box = share(build_box_domain({1.0, 1.0}, 0.125));
  const LaplaceSolver bs(box);
  const auto center = box->nearest_interior(Eigen::Vector2d(0.5, 0.5), 1e-12);
  const auto m = harmonic_measure_row(bs, *center);
  CHECK(std::abs(m.weights.sum() - 1.0) < 1e-12);
  // Reflection x -> 1 - x maps the boundary onto itself.
  for (Index b = 0; b < box->boundary_count(); ++b) {
    Eigen::Vector2d p = box->boundary_point(b);
    p(0) = 1.0 - p(0);
    for (Index c = 0; c < box->boundary_count(); ++c)
      if ((box->boundary_point(c) - p).norm() < 1e-12) CHECK(std::abs(m.weights(b) - m.weights(c)) < 1e-12);
  }

  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u(0.0, 2.0);
  Eigen::VectorXd fv(box->boundary_count());
  for (auto& v : fv) v = u(rng);
  const BoundaryData f(box, fv);
  const auto h = harmonic_extension(bs, f);
  for (Index i : {Index{0}, *center, box->interior_count() - 1}) {
    const auto row = harmonic_measure_row(bs, i);
    CHECK(std::abs(row.weights.dot(fv) - h[i]) < 1e-10);
  }
}

TEST_CASE("maximum principle, positivity and uniform bound on random data") {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const auto d = share(build_ball_domain(1.0, 2, 0.1));
  const LaplaceSolver solver(d);
  const double g1 = green_one(solver).values.maxCoeff();
  for (int trial = 0; trial < 10; ++trial) {
    Eigen::VectorXd fv(d->boundary_count());
    for (auto& v : fv) v = u(rng);
    const auto h = harmonic_extension(solver, BoundaryData(d, fv));
    CHECK(h.values.minCoeff() >= fv.minCoeff() - 1e-12);
    CHECK(h.values.maxCoeff() <= fv.maxCoeff() + 1e-12);

    Eigen::VectorXd g(d->interior_count());
    for (auto& v : g) v = u(rng);
    const Eigen::VectorXd w = green_apply(solver, g);
    CHECK(w.minCoeff() >= 0.0);
    CHECK(w.lpNorm<Eigen::Infinity>() <= g.lpNorm<Eigen::Infinity>() * g1 * (1 + 1e-12));
    const Eigen::VectorXd w2 = green_apply(solver, (2.0 * g).eval());
    CHECK((w2 - 2.0 * w).lpNorm<Eigen::Infinity>() < 1e-12);
  }
}

TEST_CASE("schrodinger solve") {
  const auto interval = share(build_box_domain({1.0}, 1.0 / 64));
  const LaplaceSolver solver(interval);
  const auto f = BoundaryData::constant(interval, 1.0);
  const auto v0 = schrodinger_solve(solver, ScalarField::constant(interval, 0.0), f);
  CHECK((v0.values - harmonic_extension(solver, f).values).lpNorm<Eigen::Infinity>() < 1e-12);

  const auto v = schrodinger_solve(solver, ScalarField::constant(interval, 1.0), f);
  double err = 0.0;
  for (Index i = 0; i < v.size(); ++i) err = std::max(err, std::abs(v[i] - cosh_oracle(interval->interior_point(i)(0))));
  CHECK(err < 1e-4);

  const auto mid = *interval->nearest_interior(Eigen::VectorXd::Constant(1, 0.5), 1e-12);
  const auto absorbed = schrodinger_solve(solver, ScalarField::constant(interval, 1e6), f);
  CHECK(absorbed[mid] < 0.01);

  std::mt19937 rng(5);
  std::uniform_real_distribution<double> u(0.0, 3.0);
  Eigen::VectorXd q1(v.size()), q2(v.size());
  for (Index i = 0; i < v.size(); ++i) {
    q1(i) = u(rng);
    q2(i) = q1(i) + u(rng);
  }
  const auto a = schrodinger_solve(solver, ScalarField(interval, q1), f);
  const auto b = schrodinger_solve(solver, ScalarField(interval, q2), f);
  CHECK((a.values.array() >= b.values.array() - 1e-14).all());
  CHECK_THROWS_AS(schrodinger_solve(solver, ScalarField::constant(interval, -1.0), f), DomainError);
}

TEST_CASE("large systems take the iterative path") {
  SolverOptions opts;
  opts.direct_limit = 100;
  const auto d = share(build_box_domain({1.0, 1.0}, 1.0 / 16));
  const LaplaceSolver iterative(d, opts);
  const LaplaceSolver direct(d);
  CHECK_FALSE(iterative.uses_direct());
  CHECK(direct.uses_direct());
  const auto a = green_one(iterative);
  const auto b = green_one(direct);
  CHECK((a.values - b.values).lpNorm<Eigen::Infinity>() < 1e-8);
}
