#include <doctest.h>

#include "semilab/cli.hpp"
#include "semilab/config.hpp"

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace semilab;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "semilab_cli_tests" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

fs::path write_config(const fs::path& dir, const json& doc) {
  const fs::path path = dir / "config.json";
  std::ofstream(path) << doc.dump(2);
  return path;
}

json read_report(const fs::path& out) {
  std::ifstream in(out / "report.json");
  return json::parse(in);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

json interval(double spacing) { return {{"shape", "box"}, {"extents", {1.0}}, {"spacing", spacing}}; }

int run_in(const fs::path& dir, const std::string& command, const json& doc, const std::string& out = "out") {
  RunOptions opts;
  opts.config = write_config(dir, doc);
  opts.out = dir / out;
  return run(command, opts);
}

}  // namespace

TEST_CASE("semilinear report carries residual and inf ratio") {
  const auto dir = scratch("semilinear");
  const json doc = {{"domain", interval(1.0 / 64)},
                    {"phi", {{"kind", "power"}, {"p", 1.0}}},
                    {"boundary", {{"type", "constant"}, {"value", 1.0}}}};
  REQUIRE(run_in(dir, "semilinear", doc) == exit_ok);
  const auto r = read_report(dir / "out");
  CHECK(r["status"] == "ok");
  CHECK(r["results"]["residual"].get<double>() <= 1e-10);
  CHECK(r["results"]["inf_ratio"].get<double>() == doctest::Approx(0.793).epsilon(1e-3));
  CHECK(r["provenance"]["tol"].get<double>() == 1e-10);
  CHECK(fs::exists(dir / "out" / "fields" / "u.csv"));
  CHECK(fs::exists(dir / "out" / "plot.gp"));
}

TEST_CASE("conditions for the square root") {
  const auto dir = scratch("conditions");
  const json doc = {{"phi", {{"kind", "power"}, {"p", 0.5}}}};
  REQUIRE(run_in(dir, "conditions", doc) == exit_ok);
  const auto r = read_report(dir / "out");
  CHECK(r["results"]["limsup"]["classification"] == "infinite");
  CHECK(r["results"]["integral"]["classification"] == "finite");
}

TEST_CASE("malformed configs exit 2 with only the error report") {
  const auto dir = scratch("malformed");
  const json negative = {{"domain", interval(-0.25)},
                         {"phi", {{"kind", "power"}, {"p", 1.0}}},
                         {"boundary", {{"type", "constant"}, {"value", 1.0}}}};
  CHECK(run_in(dir, "semilinear", negative, "neg") == exit_precondition);
  const auto r = read_report(dir / "neg");
  CHECK(r["status"] == "error");
  CHECK(r["exit_code"] == 2);
  CHECK(r["error"]["kind"] == "config_error");
  std::size_t entries = 0;
  for ([[maybe_unused]] const auto& e : fs::directory_iterator(dir / "neg")) ++entries;
  CHECK(entries == 1);

  json unknown = negative;
  unknown["domain"]["spacing"] = 0.25;
  unknown["domain"]["colour"] = "red";
  CHECK(run_in(dir, "semilinear", unknown, "unknown") == exit_precondition);
  CHECK(read_report(dir / "unknown")["error"]["message"].get<std::string>().find("colour") != std::string::npos);

  RunOptions missing;
  missing.config = dir / "does-not-exist.json";
  missing.out = dir / "missing";
  CHECK(run("dirichlet", missing) == exit_precondition);
}

TEST_CASE("order-interval violation exits 2") {
  const auto dir = scratch("precondition");
  const json doc = {{"domain", {{"shape", "box"}, {"extents", {2.0}}, {"spacing", 1.0 / 32}}},
                    {"phi", {{"kind", "exp_decay"}, {"phi0", 1.0}}},
                    {"boundary", {{"type", "constant"}, {"value", 1.0}}}};
  CHECK(run_in(dir, "semilinear", doc) == exit_precondition);
  const auto r = read_report(dir / "out");
  CHECK(r["error"]["kind"] == "precondition");
  CHECK(r["error"]["value"].get<double>() == doctest::Approx(1.0));
}

TEST_CASE("nonconvergence exits 3") {
  const auto dir = scratch("nonconvergence");
  const json doc = {{"domain", interval(1.0 / 16)},
                    {"phi", {{"kind", "power"}, {"p", 3.0}}},
                    {"boundary", {{"type", "constant"}, {"value", 50.0}}},
                    {"params", {{"tol", 1e-300}}}};
  CHECK(run_in(dir, "semilinear", doc) == exit_nonconvergence);
  CHECK(read_report(dir / "out")["error"]["kind"] == "nonconvergence");
}

TEST_CASE("reruns produce byte-identical CSV") {
  const auto dir = scratch("rerun");
  const json doc = {{"domain", {{"shape", "ball"}, {"radius", 1.0}, {"dimension", 3}, {"spacing", 0.25}}},
                    {"boundary", {{"type", "coordinate"}, {"axis", 0}, {"offset", 1.0}}},
                    {"params", {{"point", {0.25, 0.0, 0.0}}, {"paths", 500}, {"step", 1e-3}, {"seed", 17}}}};
  REQUIRE(run_in(dir, "mc-check", doc, "a") == exit_ok);
  REQUIRE(run_in(dir, "mc-check", doc, "b") == exit_ok);
  CHECK(slurp(dir / "a" / "fields" / "h.csv") == slurp(dir / "b" / "fields" / "h.csv"));
  const auto ra = read_report(dir / "a");
  const auto rb = read_report(dir / "b");
  CHECK(ra["results"] == rb["results"]);
  CHECK(ra["provenance"]["seed"] == 17);

  RunOptions opts;
  opts.config = dir / "config.json";
  opts.out = dir / "c";
  opts.seed = 18;
  REQUIRE(run("mc-check", opts) == exit_ok);
  CHECK(read_report(dir / "c")["provenance"]["seed"] == 18);
}

TEST_CASE("config grammar") {
  CHECK_THROWS_AS(parse_config(json::array()), ConfigError);
  CHECK_THROWS_AS(parse_config({{"domain", {{"shape", "torus"}, {"spacing", 0.1}}}}), ConfigError);
  CHECK_THROWS_AS(parse_config({{"params", {{"paths", -3}}}}), ConfigError);
  CHECK_THROWS_AS(parse_config({{"phi", {{"kind", "power"}}}}), ConfigError);
  const auto cfg = parse_config({{"domain", interval(0.25)},
                                 {"boundary", {{"type", "coordinate"}, {"axis", 0}, {"scale", 2.0}}},
                                 {"output", "results"}});
  REQUIRE(cfg.domain);
  CHECK(cfg.domain->dimension == 1);
  CHECK(cfg.boundary->scale == 2.0);
  CHECK(cfg.output == "results");
  CHECK_THROWS_AS(parse_config({{"domain", interval(0.25)}, {"boundary", {{"type", "coordinate"}, {"axis", 2}}}}),
                  ConfigError);
}

TEST_CASE("tabulated inputs resolve relative to the config file") {
  const auto dir = scratch("tabulated");
  std::ofstream(dir / "phi.csv") << "t,phi\n0,0\n1,1\n2,2\n10,10\n";
  const json doc = {{"domain", interval(1.0 / 32)},
                    {"phi", {{"kind", "tabulated"}, {"path", "phi.csv"}}},
                    {"boundary", {{"type", "constant"}, {"value", 1.0}}}};
  REQUIRE(run_in(dir, "semilinear", doc) == exit_ok);
  CHECK(read_report(dir / "out")["results"]["inf_ratio"].get<double>() == doctest::Approx(0.7933).epsilon(1e-3));
}
