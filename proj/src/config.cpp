#include "semilab/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace semilab {

using nlohmann::json;

namespace {

void require_object(const json& j, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + " must be an object");
}

void reject_unknown(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  for (const auto& [key, _] : j.items())
    if (!allowed.contains(key)) throw ConfigError("unknown key '" + key + "' in " + where);
}

double get_number(const json& j, const std::string& key, const std::string& where) {
  if (!j.contains(key)) throw ConfigError(where + "." + key + " is required");
  if (!j.at(key).is_number()) throw ConfigError(where + "." + key + " must be a number");
  const double v = j.at(key).get<double>();
  if (!std::isfinite(v)) throw ConfigError(where + "." + key + " must be finite");
  return v;
}

double get_positive(const json& j, const std::string& key, const std::string& where) {
  const double v = get_number(j, key, where);
  if (!(v > 0.0)) throw ConfigError(where + "." + key + " must be positive");
  return v;
}

std::string get_string(const json& j, const std::string& key, const std::string& where) {
  if (!j.contains(key)) throw ConfigError(where + "." + key + " is required");
  if (!j.at(key).is_string()) throw ConfigError(where + "." + key + " must be a string");
  return j.at(key).get<std::string>();
}

std::vector<double> get_numbers(const json& j, const std::string& key, const std::string& where) {
  if (!j.at(key).is_array()) throw ConfigError(where + "." + key + " must be an array of numbers");
  std::vector<double> out;
  for (const auto& v : j.at(key)) {
    if (!v.is_number()) throw ConfigError(where + "." + key + " must be an array of numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

int get_int(const json& j, const std::string& key, const std::string& where) {
  if (!j.at(key).is_number_integer()) throw ConfigError(where + "." + key + " must be an integer");
  return j.at(key).get<int>();
}

DomainConfig parse_domain(const json& j) {
  require_object(j, "domain");
  DomainConfig d;
  d.shape = get_string(j, "shape", "domain");
  d.spacing = get_positive(j, "spacing", "domain");
  if (d.shape == "box" || d.shape == "slab" || d.shape == "masked") {
    reject_unknown(j, d.shape == "masked" ? std::set<std::string>{"shape", "spacing", "extents", "exclude"}
                                          : std::set<std::string>{"shape", "spacing", "extents"},
                   "domain");
    if (!j.contains("extents")) throw ConfigError("domain.extents is required");
    d.extents = get_numbers(j, "extents", "domain");
    if (d.extents.empty()) throw ConfigError("domain.extents must be nonempty");
    for (double e : d.extents)
      if (!(e > 0.0)) throw ConfigError("domain.extents must be positive");
    d.dimension = static_cast<int>(d.extents.size());
    if (j.contains("exclude")) {
      if (!j.at("exclude").is_array()) throw ConfigError("domain.exclude must be an array");
      for (const auto& b : j.at("exclude")) {
        require_object(b, "domain.exclude[]");
        reject_unknown(b, {"lo", "hi"}, "domain.exclude[]");
        if (!b.contains("lo") || !b.contains("hi")) throw ConfigError("domain.exclude[] needs lo and hi");
        const auto lo = get_numbers(b, "lo", "domain.exclude[]");
        const auto hi = get_numbers(b, "hi", "domain.exclude[]");
        if (lo.size() != d.extents.size() || hi.size() != d.extents.size())
          throw ConfigError("domain.exclude[] lo/hi must match the domain dimension");
        d.exclude.push_back({Eigen::Map<const Eigen::VectorXd>(lo.data(), static_cast<Index>(lo.size())),
                             Eigen::Map<const Eigen::VectorXd>(hi.data(), static_cast<Index>(hi.size()))});
      }
    }
  } else if (d.shape == "ball") {
    reject_unknown(j, {"shape", "spacing", "radius", "dimension"}, "domain");
    d.radius = get_positive(j, "radius", "domain");
    if (!j.contains("dimension")) throw ConfigError("domain.dimension is required");
    d.dimension = get_int(j, "dimension", "domain");
    if (d.dimension < 1) throw ConfigError("domain.dimension must be >= 1");
  } else {
    throw ConfigError("domain.shape must be one of box, slab, ball, masked");
  }
  return d;
}

PhiConfig parse_phi(const json& j) {
  require_object(j, "phi");
  PhiConfig p;
  p.kind = get_string(j, "kind", "phi");
  if (p.kind == "power") {
    reject_unknown(j, {"kind", "p"}, "phi");
    p.p = get_positive(j, "p", "phi");
  } else if (p.kind == "exp_decay") {
    reject_unknown(j, {"kind", "phi0"}, "phi");
    p.phi0 = get_positive(j, "phi0", "phi");
  } else if (p.kind == "log1p" || p.kind == "zero") {
    reject_unknown(j, {"kind"}, "phi");
  } else if (p.kind == "tabulated") {
    reject_unknown(j, {"kind", "path", "monotonicity"}, "phi");
    p.path = get_string(j, "path", "phi");
    if (j.contains("monotonicity")) {
      const auto m = get_string(j, "monotonicity", "phi");
      if (m == "nondecreasing")
        p.monotonicity = Monotonicity::nondecreasing;
      else if (m == "nonincreasing")
        p.monotonicity = Monotonicity::nonincreasing;
      else
        throw ConfigError("phi.monotonicity must be nondecreasing or nonincreasing");
    }
  } else {
    throw ConfigError("phi.kind must be one of power, log1p, exp_decay, tabulated, zero");
  }
  return p;
}

BoundaryConfig parse_boundary(const json& j) {
  require_object(j, "boundary");
  BoundaryConfig b;
  b.type = get_string(j, "type", "boundary");
  if (b.type == "constant") {
    reject_unknown(j, {"type", "value"}, "boundary");
    b.value = get_number(j, "value", "boundary");
    if (b.value < 0.0) throw ConfigError("boundary.value must be nonnegative");
  } else if (b.type == "coordinate" || b.type == "r_trace") {
    reject_unknown(j, b.type == "coordinate" ? std::set<std::string>{"type", "axis", "scale", "offset"}
                                             : std::set<std::string>{"type", "axis"},
                   "boundary");
    if (j.contains("axis")) b.axis = get_int(j, "axis", "boundary");
    if (b.axis < 0) throw ConfigError("boundary.axis must be >= 0");
    if (j.contains("scale")) b.scale = get_number(j, "scale", "boundary");
    if (j.contains("offset")) b.offset = get_number(j, "offset", "boundary");
  } else if (b.type == "tabulated") {
    reject_unknown(j, {"type", "path"}, "boundary");
    b.path = get_string(j, "path", "boundary");
  } else {
    throw ConfigError("boundary.type must be one of constant, coordinate, r_trace, tabulated");
  }
  return b;
}

ParamsConfig parse_params(const json& j) {
  require_object(j, "params");
  reject_unknown(j,
                 {"tol", "scales", "boundary_point", "point", "paths", "seed", "step", "eps", "epsilon",
                  "potential", "sources", "spread_limit", "start"},
                 "params");
  ParamsConfig p;
  if (j.contains("tol")) p.tol = get_positive(j, "tol", "params");
  if (j.contains("scales")) p.scales = get_numbers(j, "scales", "params");
  if (j.contains("boundary_point")) p.boundary_point = get_numbers(j, "boundary_point", "params");
  if (j.contains("point")) p.point = get_numbers(j, "point", "params");
  if (j.contains("paths")) {
    if (!j.at("paths").is_number_integer() || j.at("paths").get<std::int64_t>() < 1)
      throw ConfigError("params.paths must be a positive integer");
    p.paths = j.at("paths").get<std::int64_t>();
  }
  if (j.contains("seed")) {
    if (!j.at("seed").is_number_unsigned() && !(j.at("seed").is_number_integer() && j.at("seed").get<std::int64_t>() >= 0))
      throw ConfigError("params.seed must be a nonnegative integer");
    p.seed = j.at("seed").get<std::uint64_t>();
  }
  if (j.contains("step")) p.step = get_positive(j, "step", "params");
  if (j.contains("eps")) p.eps = get_positive(j, "eps", "params");
  if (j.contains("epsilon")) p.epsilon = get_positive(j, "epsilon", "params");
  if (j.contains("potential")) {
    p.potential = get_number(j, "potential", "params");
    if (p.potential < 0.0) throw ConfigError("params.potential must be nonnegative");
  }
  if (j.contains("sources")) {
    p.sources = get_int(j, "sources", "params");
    if (p.sources < 1) throw ConfigError("params.sources must be >= 1");
  }
  if (j.contains("spread_limit")) p.spread_limit = get_positive(j, "spread_limit", "params");
  if (j.contains("start")) {
    p.start = get_string(j, "start", "params");
    if (p.start != "harmonic" && p.start != "zero") throw ConfigError("params.start must be harmonic or zero");
  }
  return p;
}

}  // namespace

ExperimentConfig parse_config(const json& doc, const std::filesystem::path& base_dir) {
  require_object(doc, "config");
  reject_unknown(doc, {"domain", "phi", "boundary", "params", "output"}, "config");
  ExperimentConfig cfg;
  cfg.raw = doc;
  cfg.base_dir = base_dir;
  if (doc.contains("domain")) cfg.domain = parse_domain(doc.at("domain"));
  if (doc.contains("phi")) cfg.phi = parse_phi(doc.at("phi"));
  if (doc.contains("boundary")) cfg.boundary = parse_boundary(doc.at("boundary"));
  if (doc.contains("params")) cfg.params = parse_params(doc.at("params"));
  if (doc.contains("output")) cfg.output = get_string(doc, "output", "config");
  if (cfg.boundary && cfg.domain && cfg.boundary->axis >= cfg.domain->dimension)
    throw ConfigError("boundary.axis exceeds the domain dimension");
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  return parse_config(doc, path.parent_path());
}

GridDomain make_domain(const DomainConfig& cfg) {
  if (cfg.shape == "box") return build_box_domain(cfg.extents, cfg.spacing);
  if (cfg.shape == "slab") return build_slab_domain(cfg.extents, cfg.spacing);
  if (cfg.shape == "ball") return build_ball_domain(cfg.radius, cfg.dimension, cfg.spacing);
  if (cfg.shape == "masked") return build_masked_domain(cfg.extents, cfg.spacing, cfg.exclude);
  throw ConfigError("unknown domain shape " + cfg.shape);
}

std::vector<std::vector<double>> read_numeric_csv(const std::filesystem::path& path, std::size_t columns) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open data file " + path.string());
  std::vector<std::vector<double>> cols(columns);
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::stringstream ss(line);
    std::string cell;
    std::vector<double> row;
    bool numeric = true;
    while (std::getline(ss, cell, ',')) {
      try {
        std::size_t used = 0;
        row.push_back(std::stod(cell, &used));
      } catch (const std::exception&) {
        numeric = false;
        break;
      }
    }
    if (!numeric && first) {
      first = false;
      continue;
    }
    first = false;
    if (!numeric || row.size() != columns)
      throw ConfigError("data file " + path.string() + " must have " + std::to_string(columns) + " numeric columns");
    for (std::size_t c = 0; c < columns; ++c) cols[c].push_back(row[c]);
  }
  return cols;
}

PhiSpec make_phi(const PhiConfig& cfg, const std::filesystem::path& base_dir) {
  if (cfg.kind == "power") return PhiSpec::power(cfg.p);
  if (cfg.kind == "log1p") return PhiSpec::log1p();
  if (cfg.kind == "exp_decay") return PhiSpec::exp_decay(cfg.phi0);
  if (cfg.kind == "zero") return PhiSpec::zero();
  if (cfg.kind == "tabulated") {
    auto cols = read_numeric_csv(base_dir / cfg.path, 2);
    return PhiSpec::tabulated(std::move(cols[0]), std::move(cols[1]), cfg.monotonicity);
  }
  throw ConfigError("unknown phi kind " + cfg.kind);
}

PointFunction make_boundary_function(const BoundaryConfig& cfg, const PhiSpec* phi) {
  if (cfg.type == "constant") {
    const double v = cfg.value;
    return [v](const Eigen::VectorXd&) { return v; };
  }
  if (cfg.type == "coordinate") {
    const int axis = cfg.axis;
    const double scale = cfg.scale, offset = cfg.offset;
    return [=](const Eigen::VectorXd& z) { return offset + scale * z(axis); };
  }
  if (cfg.type == "r_trace") {
    if (!phi) throw ConfigError("boundary type r_trace needs a phi section");
    const PhiSpec spec = *phi;
    const int axis = cfg.axis;
    r_inverse(spec, 0.0);  // surfaces a domain error early if Q is not defined
    return [spec, axis](const Eigen::VectorXd& z) { return r_inverse(spec, std::max(z(axis), 0.0)); };
  }
  throw UnsupportedError("boundary type " + cfg.type + " has no closed-form boundary function");
}

BoundaryData make_boundary_data(const BoundaryConfig& cfg, const DomainPtr& domain, const PhiSpec* phi,
                                const std::filesystem::path& base_dir) {
  if (cfg.type == "tabulated") {
    auto cols = read_numeric_csv(base_dir / cfg.path, 1);
    return BoundaryData(domain, Eigen::Map<const Eigen::VectorXd>(cols[0].data(), static_cast<Index>(cols[0].size())));
  }
  return BoundaryData::sample(domain, make_boundary_function(cfg, phi));
}

}  // namespace semilab
