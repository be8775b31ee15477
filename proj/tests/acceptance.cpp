// Acceptance suite: one PASS/FAIL line per criterion.

#include "semilab/cli.hpp"
#include "semilab/errors.hpp"
#include "semilab/harmonic.hpp"
#include "semilab/phi.hpp"
#include "semilab/proportionality.hpp"
#include "semilab/semilinear.hpp"
#include "semilab/stochastic.hpp"

#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>

using namespace semilab;

namespace {

DomainPtr share(GridDomain d) { return std::make_shared<const GridDomain>(std::move(d)); }

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void report(int id, const std::string& name, const std::function<Outcome()>& check) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = check();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (!o.pass) ++failures;
  std::printf("%s [%d] %s: %s (%.1fs)\n", o.pass ? "PASS" : "FAIL", id, name.c_str(), o.detail.c_str(), secs);
  std::fflush(stdout);
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

double cosh_oracle(double x) { return std::cosh(std::sqrt(2.0) * (x - 0.5)) / std::cosh(std::sqrt(2.0) / 2.0); }

// Root of b e^{-b} = level on [0, 1] by bisection.
double gauge_oracle(double level) {
  double lo = 0.0, hi = 1.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (mid * std::exp(-mid) < level ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

Index node_at(const GridDomain& d, const Eigen::VectorXd& x) {
  const auto n = d.nearest_interior(x, 1e-9);
  if (!n) throw DomainError("oracle point is not a grid node");
  return *n;
}

double ball_green_error(double spacing) {
  const LaplaceSolver solver(share(build_ball_domain(1.0, 3, spacing)));
  const auto w = green_one(solver);
  double err = 0.0;
  for (Index i = 0; i < w.size(); ++i)
    err = std::max(err, std::abs(w[i] - (1.0 - solver.domain().interior_point(i).squaredNorm()) / 3.0));
  return err;
}

Outcome criterion_green() {
  const LaplaceSolver interval(share(build_box_domain({1.0}, 1.0 / 64)));
  const auto w = green_one(interval);
  double exact_err = 0.0;
  for (Index i = 0; i < w.size(); ++i) {
    const double x = interval.domain().interior_point(i)(0);
    exact_err = std::max(exact_err, std::abs(w[i] - x * (1.0 - x)));
  }
  const double e16 = ball_green_error(1.0 / 16);
  const double e32 = ball_green_error(1.0 / 32);
  const double ratio = e16 / e32;
  return {exact_err <= 1e-12 && ratio >= 3.5 && ratio <= 4.5,
          "interval err " + fmt(exact_err) + " (<= 1e-12); ball sup-err " + fmt(e16) + " -> " + fmt(e32) +
              ", ratio " + fmt(ratio) + " (in [3.5, 4.5])"};
}

Outcome criterion_linear() {
  const auto d = share(build_box_domain({1.0}, 1.0 / 64));
  const LaplaceSolver solver(d);
  const auto r = solve_semilinear(solver, PhiSpec::power(1.0), BoundaryData::constant(d, 1.0));
  const double mid = r.solution[node_at(*d, Eigen::VectorXd::Constant(1, 0.5))];
  const double residual = verify_integral_identity(solver, r, PhiSpec::power(1.0));
  const double oracle = cosh_oracle(0.5);
  return {std::abs(mid - 0.793286) <= 1e-3 && residual <= 1e-10,
          "u(1/2) " + fmt(mid) + " vs cosh oracle " + fmt(oracle) + " (|diff to 0.793286| <= 1e-3), residual " +
              fmt(residual) + " (<= 1e-10)"};
}

BoundaryData quartic_trace(const DomainPtr& d) {
  // The r_inverse of power(1/2) applied to the first coordinate.
  const auto phi = PhiSpec::power(0.5);
  return BoundaryData::sample(d, [&](const Eigen::VectorXd& z) { return r_inverse(phi, z(0)); });
}

Outcome criterion_quartic() {
  std::vector<double> errors;
  for (double s : {1.0 / 16, 1.0 / 32, 1.0 / 64}) {
    const auto d = share(build_box_domain({1.0}, s));
    const LaplaceSolver solver(d);
    const auto r = solve_semilinear(solver, PhiSpec::power(0.5), quartic_trace(d));
    double err = 0.0;
    for (Index i = 0; i < r.solution.size(); ++i)
      err = std::max(err, std::abs(r.solution[i] - std::pow(d->interior_point(i)(0), 4) / 36.0));
    errors.push_back(err);
  }
  const double r1 = errors[0] / errors[1];
  const double r2 = errors[1] / errors[2];
  const bool order = r1 >= 3.5 && r1 <= 4.5 && r2 >= 3.5 && r2 <= 4.5;

  const auto d = share(build_box_domain({1.0}, 1.0 / 64));
  const LaplaceSolver solver(d);
  const auto probe = boundary_decay_probe(solver, PhiSpec::power(0.5), quartic_trace(d), Eigen::VectorXd::Zero(1),
                                          {0.25, 0.125, 0.0625});
  bool within = probe.probe_trace.size() == 3;
  std::string trace;
  for (const auto& s : probe.probe_trace) {
    const double rel = std::abs(s.ratio / std::pow(s.distance, 3) - 1.0);
    within = within && rel <= 0.05;
    trace += " " + fmt(s.ratio) + "/" + fmt(std::pow(s.distance, 3));
  }
  return {order && within, "sup-err " + fmt(errors[0]) + ", " + fmt(errors[1]) + ", " + fmt(errors[2]) +
                               " (ratios " + fmt(r1) + ", " + fmt(r2) + " in [3.5, 4.5]); probe ratio/x^3:" + trace +
                               " (each within 5%)"};
}

struct ProbeRun {
  bool decreasing = true;
  double last_over_first = 0.0;
  std::size_t samples = 0;
};

ProbeRun slab_probe(double spacing, const std::vector<double>& scales) {
  const auto d = share(build_slab_domain({1.0, 1.0, 1.0}, spacing));
  const LaplaceSolver solver(d);
  const auto probe = boundary_decay_probe(solver, PhiSpec::power(0.5), quartic_trace(d),
                                          Eigen::Vector3d(0.0, 0.5, 0.5), scales);
  ProbeRun out;
  out.samples = probe.probe_trace.size();
  for (std::size_t k = 1; k < probe.probe_trace.size(); ++k)
    out.decreasing = out.decreasing && probe.probe_trace[k].ratio < probe.probe_trace[k - 1].ratio;
  out.last_over_first = probe.probe_trace.back().ratio / probe.probe_trace.front().ratio;
  return out;
}

double slab_linear_inf_ratio(double spacing) {
  const auto d = share(build_slab_domain({1.0, 1.0, 1.0}, spacing));
  const LaplaceSolver solver(d);
  const auto r = solve_semilinear(solver, PhiSpec::power(1.0), BoundaryData::constant(d, 1.0));
  return ratio_field(r.solution, r.harmonic_part).inf_ratio;
}

Outcome criterion_slab() {
  // At spacing 1/16 every probe scale must be at least two spacings.
  const auto coarse = slab_probe(1.0 / 16, {0.5, 0.25, 0.125});
  const auto fine = slab_probe(1.0 / 32, {0.25, 0.125, 0.0625});
  const double i16 = slab_linear_inf_ratio(1.0 / 16);
  const double i32 = slab_linear_inf_ratio(1.0 / 32);
  const double change = std::abs(i32 - i16) / i16;
  const bool decay = coarse.samples == 3 && coarse.decreasing && coarse.last_over_first < 0.25 && fine.samples == 3 &&
                     fine.decreasing && fine.last_over_first < 0.25;
  const bool bounded = i16 >= 0.5 && i32 >= 0.5 && change <= 0.10;
  return {decay && bounded,
          "sqrt probe last/first " + fmt(coarse.last_over_first) + " at 1/16, " + fmt(fine.last_over_first) +
              " at 1/32 (strictly decreasing, < 0.25); linear inf u/h " + fmt(i16) + " -> " + fmt(i32) +
              " (>= 0.5, change " + fmt(change) + " <= 0.10)"};
}

Outcome criterion_certificate() {
  std::mt19937_64 rng(505);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const std::vector<PhiSpec> phis{PhiSpec::power(1.0), PhiSpec::power(2.0), PhiSpec::log1p()};
  int certified = 0, sound = 0;
  double worst = 1e300;
  for (int trial = 0; trial < 20; ++trial) {
    DomainPtr d;
    switch (trial % 3) {
      case 0: d = share(build_box_domain({0.25 * (1 + static_cast<int>(u(rng) * 6))}, 1.0 / 64)); break;
      case 1:
        d = share(build_box_domain({0.25 * (1 + static_cast<int>(u(rng) * 4)), 0.25 * (1 + static_cast<int>(u(rng) * 4))},
                                   1.0 / 32));
        break;
      default: d = share(build_ball_domain(0.5 + u(rng), 3, 1.0 / 8)); break;
    }
    const double amp = 0.1 + 3.0 * u(rng);
    Eigen::VectorXd fv(d->boundary_count());
    for (auto& v : fv) v = amp * (0.2 + u(rng));
    const LaplaceSolver solver(d);
    const auto r = proportionality_certificate(solver, BoundaryData(d, fv), phis[static_cast<std::size_t>(trial) % 3]);
    if (!r.certified_lower) continue;
    ++certified;
    const double margin = r.inf_ratio - (*r.certified_lower - 1e-8);
    worst = std::min(worst, margin);
    if (margin >= 0.0) ++sound;
  }
  return {certified > 0 && sound == certified,
          std::to_string(sound) + "/" + std::to_string(certified) + " certified triples sound out of 20, worst margin " +
              fmt(worst)};
}

Outcome criterion_comparison() {
  std::mt19937_64 rng(606);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const std::vector<PhiSpec> phis{PhiSpec::power(1.0), PhiSpec::power(2.0), PhiSpec::log1p()};
  int pass = 0;
  double worst = -1e300;
  for (int trial = 0; trial < 50; ++trial) {
    const double ex = 0.25 * (1 + static_cast<int>(u(rng) * 6));
    const double ey = 0.25 * (1 + static_cast<int>(u(rng) * 6));
    const auto d = share(build_box_domain({ex, ey}, 1.0 / 16));
    const LaplaceSolver solver(d);
    Eigen::VectorXd f2(d->boundary_count()), f1(d->boundary_count());
    const double amp = 5.0 * u(rng);
    for (Index b = 0; b < f2.size(); ++b) {
      f2(b) = amp * u(rng);
      f1(b) = f2(b) * u(rng);
    }
    const auto& phi = phis[static_cast<std::size_t>(trial) % 3];
    const auto r1 = solve_semilinear(solver, phi, BoundaryData(d, f1));
    const auto r2 = solve_semilinear(solver, phi, BoundaryData(d, f2));
    const double excess = (r1.solution.values - r2.solution.values).maxCoeff();
    worst = std::max(worst, excess);
    if (excess <= 1e-9) ++pass;
  }
  return {pass == 50, std::to_string(pass) + "/50 pairs ordered, worst max(u1 - u2) " + fmt(worst) + " (<= 1e-9)"};
}

Outcome criterion_classifiers() {
  int agree = 0, total = 0;
  std::string misses;
  auto tally = [&](bool ok, const std::string& what) {
    ++total;
    if (ok)
      ++agree;
    else
      misses += " " + what;
  };
  auto power_table = [](double p) {
    std::vector<double> t{0.0}, v{0.0};
    for (int k = -12; k <= 2; ++k) {
      const double s = std::pow(10.0, k);
      t.push_back(s);
      v.push_back(std::pow(s, p));
    }
    return PhiSpec::tabulated(t, v, Monotonicity::nondecreasing);
  };
  std::vector<double> ps;
  for (int k = 1; k <= 9; ++k) ps.push_back(0.1 * k);
  for (double p : {1.0, 1.25, 1.5}) ps.push_back(p);
  for (double p : ps) {
    const bool finite = p < 1.0;
    const auto closed = check_integral_condition(PhiSpec::power(p), 1.0);
    tally((closed.classification == IntegralClass::finite) == finite, "integral p=" + fmt(p));
    const auto numeric = classify_integral_numeric(PhiSpec::power(p), 1.0);
    tally((numeric.classification == IntegralClass::finite) == finite, "numeric-integral p=" + fmt(p));
    const auto lim = check_zero_limit_ratio(PhiSpec::power(p));
    tally((lim.classification == LimsupClass::finite_limsup) == (p >= 1.0), "limsup p=" + fmt(p));
    const auto tab = check_zero_limit_ratio(power_table(p));
    tally((tab.classification == LimsupClass::finite_limsup) == (p >= 1.0), "numeric-limsup p=" + fmt(p));
  }
  tally(check_zero_limit_ratio(PhiSpec::log1p()).classification == LimsupClass::finite_limsup, "limsup log1p");
  return {agree == total, std::to_string(agree) + "/" + std::to_string(total) + " classifications agree" +
                              (misses.empty() ? std::string() : "; misses:" + misses)};
}

Outcome criterion_order_interval() {
  const auto d = share(build_box_domain({1.0}, 1.0 / 64));
  const LaplaceSolver solver(d);
  const auto phi = PhiSpec::exp_decay(1.0);
  const auto r = solve_semilinear(solver, phi, BoundaryData::constant(d, 1.0));
  const double c = r.green_bound_c.value_or(NAN);
  const double b = r.gauge_b.value_or(NAN);
  const double b_oracle = gauge_oracle(0.25);
  const Eigen::ArrayXd h = r.harmonic_part.values.array();
  const Eigen::ArrayXd u = r.solution.values.array();
  const bool inside = (u >= std::exp(-b) * h - 1e-8).all() && (u <= h + 1e-8).all();
  const double residual = verify_integral_identity(solver, r, phi);

  const auto dir = std::filesystem::temp_directory_path() / "semilab_acceptance_c8";
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  const nlohmann::json cfg = {{"domain", {{"shape", "box"}, {"extents", {2.0}}, {"spacing", 1.0 / 32}}},
                              {"phi", {{"kind", "exp_decay"}, {"phi0", 1.0}}},
                              {"boundary", {{"type", "constant"}, {"value", 1.0}}}};
  std::ofstream(dir / "config.json") << cfg.dump();
  RunOptions opts;
  opts.config = dir / "config.json";
  opts.out = dir / "out";
  const int status = run("semilinear", opts);

  const bool ok = std::abs(c - 0.25) <= 1e-10 && std::abs(b - 0.35740) <= 1e-4 && std::abs(b - b_oracle) <= 1e-4 &&
                  inside && residual <= 1e-10 && status == 2;
  return {ok, "c " + fmt(c) + " (0.25 +- 1e-10), b " + fmt(b) + " vs bisection " + fmt(b_oracle) +
                  " (+- 1e-4), order interval " + (inside ? "held" : "violated") + ", residual " + fmt(residual) +
                  " (<= 1e-10), length-2 interval exit " + std::to_string(status) + " (expect 2)"};
}

Outcome criterion_monte_carlo() {
  const auto ball = ContinuumShape::ball(1.0, 3);
  const PointFunction z1 = [](const Eigen::VectorXd& z) { return z(0); };
  const Eigen::Vector3d x(0.3, 0.0, 0.0);
  const auto wos = wos_harmonic(ball, z1, x, 100000, 1e-4, 2024);
  const auto wos_again = wos_harmonic(ball, z1, x, 100000, 1e-4, 2024);
  const bool wos_ok = std::abs(wos.mean - 0.3) <= 3.0 * wos.stderr_;

  const auto interval = ContinuumShape::box({1.0});
  const PointFunction unit = [](const Eigen::VectorXd&) { return 1.0; };
  const auto fk = feynman_kac_estimate(interval, unit, unit, Eigen::VectorXd::Constant(1, 0.5), 20000, 1e-4, 2025);
  const bool fk_ok = std::abs(fk.mean - 0.79329) <= std::max(3.0 * fk.stderr_, 0.01);

  const auto tau = exit_time_estimate(ball, Eigen::Vector3d::Zero(), 10000, 1e-4, 2026);
  const auto tau_again = exit_time_estimate(ball, Eigen::Vector3d::Zero(), 10000, 1e-4, 2026);
  const bool tau_ok = std::abs(tau.mean - 1.0 / 3) <= std::max(3.0 * tau.stderr_, 0.01);

  const bool repro = wos.mean == wos_again.mean && wos.stderr_ == wos_again.stderr_ && tau.mean == tau_again.mean &&
                     tau.stderr_ == tau_again.stderr_;
  return {wos_ok && fk_ok && tau_ok && repro,
          "wos " + fmt(wos.mean) + " +- " + fmt(wos.stderr_) + " vs 0.3; feynman-kac " + fmt(fk.mean) + " +- " +
              fmt(fk.stderr_) + " vs 0.79329; exit time " + fmt(tau.mean) + " +- " + fmt(tau.stderr_) +
              " vs 1/3; reruns " + (repro ? "bit-identical" : "differ")};
}

Outcome criterion_alpha() {
  const auto d = share(build_box_domain({1.0}, 1.0 / 64));
  const LaplaceSolver solver(d);
  const auto one = BoundaryData::constant(d, 1.0);
  const auto sqrt_phi = PhiSpec::power(0.5);
  const auto a = alpha_threshold_nondecreasing(solver, one, sqrt_phi);
  const auto h = harmonic_extension(solver, one).values;
  const double above = alpha_kappa(solver, sqrt_phi, h, 1.01 * a.alpha);
  const double below = alpha_kappa(solver, sqrt_phi, h, a.alpha / 4);
  const auto e = alpha_threshold_nonincreasing(solver, one, PhiSpec::exp_decay(1.0));
  const double e_target = std::exp(1.0) / 4;
  const bool ok = std::abs(a.alpha - 1.0 / 16) <= 1e-3 && std::abs(e.alpha - e_target) <= 1e-10 && above < 1.0 &&
                  below >= 1.0;
  return {ok, "power(1/2) alpha " + fmt(a.alpha) + " (1/16 +- 1e-3), exp_decay alpha " + fmt(e.alpha) +
                  " (e/4 +- 1e-10), kappa(1.01 alpha) " + fmt(above) + " (< 1), kappa(alpha/4) " + fmt(below) +
                  " (>= 1)"};
}

}  // namespace

int main() {
  report(1, "Green/exit-time oracle", criterion_green);
  report(2, "linear phi cosh oracle", criterion_linear);
  report(3, "square-root exact construction", criterion_quartic);
  report(4, "3D slab decay versus proportionality", criterion_slab);
  report(5, "certificate soundness", criterion_certificate);
  report(6, "comparison principle", criterion_comparison);
  report(7, "condition classifiers", criterion_classifiers);
  report(8, "order-interval solver", criterion_order_interval);
  report(9, "Monte Carlo cross-checks", criterion_monte_carlo);
  report(10, "alpha thresholds", criterion_alpha);
  std::printf("%d of 10 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
