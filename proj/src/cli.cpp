#include "semilab/cli.hpp"

#include "semilab/config.hpp"
#include "semilab/errors.hpp"
#include "semilab/harmonic.hpp"
#include "semilab/phi.hpp"
#include "semilab/proportionality.hpp"
#include "semilab/semilinear.hpp"
#include "semilab/stochastic.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace semilab {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

constexpr int schema_version = 1;
constexpr double default_tol = 1e-10;
constexpr std::uint64_t default_seed = 20240601;

struct Outputs {
  json results = json::object();
  std::vector<std::pair<std::string, std::string>> files;  // relative path, body
  std::string plot;
};

struct Context {
  ExperimentConfig cfg;
  double tol = default_tol;
  std::uint64_t seed = default_seed;
  SolveOptions solve;
};

json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json optional_number(const std::optional<double>& v) { return v ? number(*v) : json(nullptr); }

json vector_json(const Eigen::VectorXd& v) {
  json out = json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back(number(v(i)));
  return out;
}

Eigen::VectorXd to_vector(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Index>(v.size()));
}

std::string field_csv(const ScalarField& field, const std::string& name) {
  std::ostringstream os;
  write_field_csv(os, field, name);
  return os.str();
}

std::string boundary_csv(const BoundaryData& data, const std::string& name) {
  std::ostringstream os;
  write_boundary_csv(os, data, name);
  return os.str();
}

// gnuplot commands showing a field dump against its coordinates.
std::string plot_field(const std::string& file, int dim, const std::string& title) {
  std::ostringstream os;
  os << "set datafile separator ','\nset key autotitle columnhead\nset title '" << title << "'\n";
  if (dim == 1) {
    os << "plot 'fields/" << file << "' using 1:2 with linespoints\n";
  } else if (dim == 2) {
    os << "splot 'fields/" << file << "' using 1:2:3 with points palette\n";
  } else {
    os << "# value against the first coordinate\nplot 'fields/" << file << "' using 1:" << dim + 1
       << " with points\n";
  }
  return os.str();
}

DomainPtr require_domain(const Context& ctx) {
  if (!ctx.cfg.domain) throw ConfigError("this command needs a domain section");
  return std::make_shared<const GridDomain>(make_domain(*ctx.cfg.domain));
}

PhiSpec require_phi(const Context& ctx) {
  if (!ctx.cfg.phi) throw ConfigError("this command needs a phi section");
  return make_phi(*ctx.cfg.phi, ctx.cfg.base_dir);
}

BoundaryData require_boundary(const Context& ctx, const DomainPtr& domain, const PhiSpec* phi) {
  if (!ctx.cfg.boundary) throw ConfigError("this command needs a boundary section");
  return make_boundary_data(*ctx.cfg.boundary, domain, phi, ctx.cfg.base_dir);
}

// r_trace data needs φ even for commands that do not otherwise use it.
std::optional<PhiSpec> optional_phi(const Context& ctx) {
  if (!ctx.cfg.phi) return std::nullopt;
  return make_phi(*ctx.cfg.phi, ctx.cfg.base_dir);
}

json domain_json(const GridDomain& d) {
  return {{"shape", to_string(d.shape())},
          {"dimension", d.dimension()},
          {"spacing", d.spacing()},
          {"interior_nodes", d.interior_count()},
          {"boundary_points", d.boundary_count()}};
}

Outputs cmd_dirichlet(const Context& ctx) {
  const auto domain = require_domain(ctx);
  const auto phi = optional_phi(ctx);
  const auto f = require_boundary(ctx, domain, phi ? &*phi : nullptr);
  const LaplaceSolver solver(domain);
  const auto h = harmonic_extension(solver, f);
  Outputs out;
  out.results = {{"domain", domain_json(*domain)},
                 {"linear_solver", solver.uses_direct() ? "direct" : "cg"},
                 {"h_min", number(h.values.minCoeff())},
                 {"h_max", number(h.values.maxCoeff())}};
  out.files = {{"fields/h.csv", field_csv(h, "h")}, {"fields/boundary.csv", boundary_csv(f, "f")}};
  out.plot = plot_field("h.csv", domain->dimension(), "harmonic extension");
  return out;
}

json solve_json(const SolveReport& r, double identity) {
  return {{"regime", to_string(r.regime)},
          {"method", to_string(r.method)},
          {"residual", number(r.residual)},
          {"identity_residual", number(identity)},
          {"iterations", r.iterations},
          {"newton_iterations", r.newton_iterations},
          {"bracket_gap", number(r.bracket_gap)},
          {"gauge_b", optional_number(r.gauge_b)},
          {"green_bound_c", optional_number(r.green_bound_c)}};
}

Outputs cmd_semilinear(const Context& ctx) {
  const auto domain = require_domain(ctx);
  const auto phi = require_phi(ctx);
  const auto f = require_boundary(ctx, domain, &phi);
  const LaplaceSolver solver(domain);
  const auto report = solve_semilinear(solver, phi, f, ctx.solve);
  const double identity = verify_integral_identity(solver, report, phi);
  Outputs out;
  out.results = solve_json(report, identity);
  out.results["domain"] = domain_json(*domain);
  out.results["phi"] = phi.describe();
  out.results["u_max"] = number(report.solution.values.maxCoeff());
  out.files = {{"fields/u.csv", field_csv(report.solution, "u")},
               {"fields/h.csv", field_csv(report.harmonic_part, "h")}};
  if ((report.harmonic_part.values.array() > 0.0).all()) {
    const auto ratio = ratio_field(report.solution, report.harmonic_part);
    out.results["inf_ratio"] = number(ratio.inf_ratio);
    out.results["sup_ratio"] = number(ratio.sup_ratio);
    out.files.emplace_back("fields/ratio.csv", field_csv(ratio.ratio, "ratio"));
  } else {
    out.results["inf_ratio"] = nullptr;
    out.results["sup_ratio"] = nullptr;
  }
  out.plot = plot_field("u.csv", domain->dimension(), "semilinear solution");
  return out;
}

Outputs cmd_certificate(const Context& ctx) {
  const auto domain = require_domain(ctx);
  const auto phi = require_phi(ctx);
  const auto f = require_boundary(ctx, domain, &phi);
  const LaplaceSolver solver(domain);
  const auto r = proportionality_certificate(solver, f, phi, ctx.solve);
  Outputs out;
  out.results = {{"domain", domain_json(*domain)},
                 {"phi", phi.describe()},
                 {"kappa", optional_number(r.kappa)},
                 {"certified_lower", optional_number(r.certified_lower)},
                 {"inconclusive", r.inconclusive},
                 {"inf_ratio", number(r.inf_ratio)},
                 {"sup_ratio", number(r.sup_ratio)},
                 {"bound_holds", r.certified_lower ? json(r.inf_ratio >= *r.certified_lower - 1e-8) : json(nullptr)}};
  out.files = {{"fields/ratio.csv", field_csv(r.ratio, "ratio")}};
  out.plot = plot_field("ratio.csv", domain->dimension(), "u/h");
  return out;
}

Outputs cmd_probe(const Context& ctx) {
  const auto domain = require_domain(ctx);
  const auto phi = require_phi(ctx);
  const auto f = require_boundary(ctx, domain, &phi);
  const auto& p = ctx.cfg.params;
  if (p.boundary_point.empty()) throw ConfigError("probe needs params.boundary_point");
  if (p.scales.empty()) throw ConfigError("probe needs params.scales");
  if (static_cast<int>(p.boundary_point.size()) != domain->dimension())
    throw ConfigError("params.boundary_point has the wrong dimension");
  const LaplaceSolver solver(domain);
  const auto r = boundary_decay_probe(solver, phi, f, to_vector(p.boundary_point), p.scales, ctx.solve);
  Outputs out;
  json trace = json::array();
  std::ostringstream csv;
  csv << "distance,ratio\n";
  bool decreasing = true;
  for (std::size_t k = 0; k < r.probe_trace.size(); ++k) {
    const auto& s = r.probe_trace[k];
    trace.push_back({{"distance", number(s.distance)}, {"ratio", number(s.ratio)}, {"point", vector_json(s.point)}});
    csv << format_double(s.distance) << ',' << format_double(s.ratio) << '\n';
    if (k > 0 && !(s.ratio < r.probe_trace[k - 1].ratio)) decreasing = false;
  }
  out.results = {{"domain", domain_json(*domain)},
                 {"phi", phi.describe()},
                 {"trace", trace},
                 {"warnings", r.warnings},
                 {"inf_ratio", number(r.inf_ratio)},
                 {"sup_ratio", number(r.sup_ratio)},
                 {"strictly_decreasing", decreasing},
                 {"last_over_first", r.probe_trace.size() >= 2
                                         ? number(r.probe_trace.back().ratio / r.probe_trace.front().ratio)
                                         : json(nullptr)}};
  out.files = {{"fields/probe_trace.csv", csv.str()}, {"fields/ratio.csv", field_csv(r.ratio, "ratio")}};
  out.plot =
      "set datafile separator ','\nset key autotitle columnhead\nset logscale xy\n"
      "set xlabel 'distance to boundary'\nset ylabel 'u/h'\n"
      "plot 'fields/probe_trace.csv' using 1:2 with linespoints\n";
  return out;
}

Outputs cmd_conditions(const Context& ctx) {
  const auto phi = require_phi(ctx);
  const double eps = ctx.cfg.params.epsilon.value_or(1.0);
  const auto lim = check_zero_limit_ratio(phi);
  const auto integral = check_integral_condition(phi, eps);
  Outputs out;
  out.results = {{"phi", phi.describe()},
                 {"limsup",
                  {{"classification", lim.classification == LimsupClass::finite_limsup ? "finite" : "infinite"},
                   {"witness", number(lim.witness)},
                   {"closed_form", lim.closed_form}}},
                 {"integral",
                  {{"classification", to_string(integral.classification)},
                   {"epsilon", eps},
                   {"value", number(integral.value)},
                   {"vanishing", integral.vanishing},
                   {"slope", number(integral.slope)},
                   {"closed_form", integral.closed_form}}}};
  std::ostringstream csv;
  csv << "t,phi\n";
  for (int k = 0; k <= 200; ++k) {
    const double t = eps * k / 200.0;
    csv << format_double(t) << ',' << format_double(eval_phi(phi, t)) << '\n';
  }
  out.files = {{"fields/phi.csv", csv.str()}};
  out.plot =
      "set datafile separator ','\nset key autotitle columnhead\nset xlabel 't'\n"
      "plot 'fields/phi.csv' using 1:2 with lines\n";
  return out;
}

Outputs cmd_alpha(const Context& ctx) {
  const auto domain = require_domain(ctx);
  const auto phi = require_phi(ctx);
  const auto f = require_boundary(ctx, domain, &phi);
  const LaplaceSolver solver(domain);
  Outputs out;
  const bool nondecreasing = phi.is_nondecreasing();
  const auto a = nondecreasing ? alpha_threshold_nondecreasing(solver, f, phi)
                               : alpha_threshold_nonincreasing(solver, f, phi);
  out.results = {{"domain", domain_json(*domain)},
                 {"phi", phi.describe()},
                 {"regime", nondecreasing ? "nondecreasing" : "nonincreasing"},
                 {"alpha_f", number(a.alpha)},
                 {"green_bound_c", number(a.green_bound_c)},
                 {"h_sup", number(a.h_sup)},
                 {"kappa", optional_number(a.kappa)}};
  const auto h = harmonic_extension(solver, f);
  if (nondecreasing && a.alpha > 0.0) {
    out.results["kappa_above"] = number(alpha_kappa(solver, phi, h.values, 1.01 * a.alpha));
    out.results["kappa_below"] = number(alpha_kappa(solver, phi, h.values, 0.25 * a.alpha));
  }
  out.files = {{"fields/h.csv", field_csv(h, "h")}};
  out.plot = plot_field("h.csv", domain->dimension(), "harmonic extension");
  return out;
}

json estimate_json(const MCEstimate& e) {
  return {{"mean", number(e.mean)},       {"stderr", number(e.stderr_)},  {"paths", e.paths},
          {"seed", e.seed},               {"step", number(e.step)},       {"excluded", e.excluded},
          {"excluded_flag", e.excluded_flag}, {"high_bias", e.high_bias}};
}

Outputs cmd_mc_check(const Context& ctx) {
  const auto domain = require_domain(ctx);
  const auto& p = ctx.cfg.params;
  if (!ctx.cfg.boundary) throw ConfigError("mc-check needs a boundary section");
  if (p.point.empty()) throw ConfigError("mc-check needs params.point");
  if (static_cast<int>(p.point.size()) != domain->dimension())
    throw ConfigError("params.point has the wrong dimension");
  const auto phi = optional_phi(ctx);
  const auto shape = ContinuumShape::from_domain(*domain);
  const auto f_fn = make_boundary_function(*ctx.cfg.boundary, phi ? &*phi : nullptr);
  const auto f = BoundaryData::sample(domain, f_fn);
  const Eigen::VectorXd x = to_vector(p.point);
  const auto node = domain->nearest_interior(x, 1e-6 * domain->spacing());
  if (!node) throw ConfigError("params.point must be an interior grid node");

  const LaplaceSolver solver(domain);
  const auto h = harmonic_extension(solver, f);
  const auto g1 = green_one(solver);
  const double q = p.potential;
  const auto v = schrodinger_solve(solver, ScalarField::constant(domain, q), f);

  const double sup_f = f.values.cwiseAbs().maxCoeff();
  const double h2 = domain->spacing() * domain->spacing();
  const double allowance = 2.0 * h2 * std::max(1.0, sup_f);

  const auto wos = wos_harmonic(shape, f_fn, x, p.paths, p.eps, ctx.seed);
  const auto exit = exit_time_estimate(shape, x, p.paths, p.step, ctx.seed);
  const auto fk = feynman_kac_estimate(
      shape, [q](const Eigen::VectorXd&) { return q; }, f_fn, x, p.paths, p.step, ctx.seed);

  auto check = [](const MCEstimate& e, double reference, double floor) {
    json j = estimate_json(e);
    const double tol = std::max(3.0 * e.stderr_, floor);
    j["reference"] = number(reference);
    j["tolerance"] = number(tol);
    j["agrees"] = std::abs(e.mean - reference) <= tol;
    return j;
  };
  Outputs out;
  out.results = {{"domain", domain_json(*domain)},
                 {"point", vector_json(x)},
                 {"node", *node},
                 {"harmonic", check(wos, h.values(*node), allowance)},
                 {"exit_time", check(exit, g1.values(*node), 0.01)},
                 {"feynman_kac", check(fk, v.values(*node), 0.01)}};
  out.results["feynman_kac"]["potential"] = q;
  out.results["agrees"] = out.results["harmonic"]["agrees"].get<bool>() &&
                          out.results["exit_time"]["agrees"].get<bool>() &&
                          out.results["feynman_kac"]["agrees"].get<bool>();
  out.files = {{"fields/h.csv", field_csv(h, "h")}, {"fields/green_one.csv", field_csv(g1, "green_one")}};
  out.plot = plot_field("h.csv", domain->dimension(), "harmonic extension");
  return out;
}

json zhao_json(const GreenSpreadReport& z) {
  return {{"sup_ratio", number(z.sup_ratio)},
          {"inf_ratio", number(z.inf_ratio)},
          {"spread", number(z.spread)},
          {"pairs", z.pairs},
          {"sources", z.sources}};
}

Outputs cmd_zhao(const Context& ctx) {
  const auto domain = require_domain(ctx);
  const auto& p = ctx.cfg.params;
  const LaplaceSolver solver(domain);
  const auto z = zhao_estimate_check(solver, p.sources);
  Outputs out;
  out.results = zhao_json(z);
  out.results["domain"] = domain_json(*domain);
  out.results["spread_limit"] = p.spread_limit;
  out.results["within_limit"] = std::isfinite(z.spread) && z.spread <= p.spread_limit;

  DomainConfig coarse_cfg = *ctx.cfg.domain;
  coarse_cfg.spacing *= 2.0;
  try {
    const LaplaceSolver coarse(make_domain(coarse_cfg));
    const auto zc = zhao_estimate_check(coarse, p.sources);
    out.results["coarse"] = zhao_json(zc);
    out.results["coarse"]["spacing"] = coarse_cfg.spacing;
    out.results["stable"] = zc.spread > 0.0 && z.spread <= 2.0 * zc.spread && z.spread >= 0.5 * zc.spread;
  } catch (const DomainError&) {
    out.results["coarse"] = nullptr;
    out.results["stable"] = nullptr;
  }
  const Eigen::VectorXd column = green_kernel_column(solver, z.sources.front());
  out.files = {{"fields/green_column.csv", field_csv(ScalarField(domain, column), "green")}};
  out.plot = plot_field("green_column.csv", domain->dimension(), "Green kernel column");
  return out;
}

const std::map<std::string, std::function<Outputs(const Context&)>>& dispatch() {
  static const std::map<std::string, std::function<Outputs(const Context&)>> table = {
      {"dirichlet", cmd_dirichlet}, {"semilinear", cmd_semilinear}, {"certificate", cmd_certificate},
      {"probe", cmd_probe},         {"conditions", cmd_conditions}, {"alpha", cmd_alpha},
      {"mc-check", cmd_mc_check},   {"zhao", cmd_zhao}};
  return table;
}

json error_json(const std::exception& e) {
  json j = {{"kind", "internal"}, {"message", e.what()}};
  if (const auto* err = dynamic_cast<const Error*>(&e)) j["kind"] = err->kind();
  if (const auto* pre = dynamic_cast<const PreconditionError*>(&e)) {
    j["value"] = number(pre->value());
    j["threshold"] = number(pre->threshold());
  }
  if (const auto* nc = dynamic_cast<const NonconvergenceError*>(&e)) {
    j["bracket_gap"] = number(nc->bracket_gap());
    j["residual"] = number(nc->residual());
  }
  return j;
}

int status_of(const std::exception& e) {
  if (dynamic_cast<const InvariantError*>(&e)) return exit_internal;
  if (dynamic_cast<const SolverError*>(&e)) return exit_nonconvergence;
  if (dynamic_cast<const DomainError*>(&e) || dynamic_cast<const UnsupportedError*>(&e) ||
      dynamic_cast<const PreconditionError*>(&e))
    return exit_precondition;
  return exit_internal;
}

void write_text(const fs::path& path, const std::string& body) {
  fs::create_directories(path.parent_path());
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  os << body;
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> n;
    for (const auto& [name, _] : dispatch()) n.push_back(name);
    return n;
  }();
  return names;
}

int run(const std::string& command, const RunOptions& options) {
  json report = {{"schema_version", schema_version},
                 {"command", command},
                 {"status", "ok"},
                 {"exit_code", exit_ok},
                 {"config", nullptr},
                 {"provenance", {{"tool", "semilab"}, {"seed", nullptr}, {"tol", nullptr}}},
                 {"results", nullptr},
                 {"files", json::array()},
                 {"error", nullptr}};
  fs::path out_dir = options.out.value_or("semilab_out");
  Outputs outputs;
  int status = exit_ok;
  try {
    Context ctx;
    ctx.cfg = load_config(options.config);
    if (!options.out && !ctx.cfg.output.empty()) out_dir = ctx.cfg.base_dir / ctx.cfg.output;
    report["config"] = ctx.cfg.raw;
    ctx.tol = options.tol.value_or(ctx.cfg.params.tol.value_or(default_tol));
    if (!(ctx.tol > 0.0) || !std::isfinite(ctx.tol)) throw ConfigError("tolerance must be positive");
    ctx.seed = options.seed.value_or(ctx.cfg.params.seed.value_or(default_seed));
    ctx.solve.tol = ctx.tol;
    ctx.solve.start = ctx.cfg.params.start == "zero" ? InitialGuess::zero : InitialGuess::harmonic;
    report["provenance"]["seed"] = ctx.seed;
    report["provenance"]["tol"] = ctx.tol;
    const auto it = dispatch().find(command);
    if (it == dispatch().end()) throw ConfigError("unknown command '" + command + "'");
    outputs = it->second(ctx);
    report["results"] = outputs.results;
  } catch (const std::exception& e) {
    status = status_of(e);
    report["status"] = "error";
    report["exit_code"] = status;
    report["results"] = nullptr;
    report["error"] = error_json(e);
    outputs = Outputs{};
  }
  try {
    if (status == exit_ok) {
      for (const auto& [rel, body] : outputs.files) {
        write_text(out_dir / rel, body);
        report["files"].push_back(rel);
      }
      write_text(out_dir / "plot.gp", outputs.plot);
      report["files"].push_back("plot.gp");
    }
    write_text(out_dir / "report.json", report.dump(2) + "\n");
  } catch (const std::exception&) {
    return exit_internal;
  }
  return status;
}

}  // namespace semilab
