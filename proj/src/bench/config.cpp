#include "goco/bench/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "goco/error.hpp"
#include "goco/rng.hpp"

namespace goco::bench {

namespace {

[[noreturn]] void fail(const std::string& msg) { throw Error(ErrorCode::config, msg); }

void check_keys(const Json& obj, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) fail(where + " must be an object");
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (auto it = obj.begin(); it != obj.end(); ++it)
    if (!ok.count(it.key())) fail("unknown key '" + it.key() + "' in " + where);
}

double number(const Json& obj, const char* key, double fallback) {
  if (!obj.contains(key)) return fallback;
  const Json& v = obj.at(key);
  if (!v.is_number()) fail(std::string("'") + key + "' must be a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) fail(std::string("'") + key + "' must be finite");
  return x;
}

int integer(const Json& obj, const char* key, int fallback) {
  if (!obj.contains(key)) return fallback;
  const Json& v = obj.at(key);
  if (!v.is_number_integer()) fail(std::string("'") + key + "' must be an integer");
  return v.get<int>();
}

std::string text(const Json& obj, const char* key, const std::string& fallback) {
  if (!obj.contains(key)) return fallback;
  const Json& v = obj.at(key);
  if (!v.is_string()) fail(std::string("'") + key + "' must be a string");
  return v.get<std::string>();
}

std::vector<double> numbers(const Json& obj, const char* key) {
  if (!obj.contains(key)) return {};
  const Json& v = obj.at(key);
  if (!v.is_array()) fail(std::string("'") + key + "' must be an array of numbers");
  std::vector<double> out;
  for (const Json& e : v) {
    if (!e.is_number()) fail(std::string("'") + key + "' must be an array of numbers");
    out.push_back(e.get<double>());
  }
  return out;
}

std::vector<std::vector<double>> matrix(const Json& obj, const char* key) {
  if (!obj.contains(key)) return {};
  const Json& v = obj.at(key);
  if (!v.is_array()) fail(std::string("'") + key + "' must be an array of arrays");
  std::vector<std::vector<double>> out;
  for (const Json& row : v) {
    if (!row.is_array()) fail(std::string("'") + key + "' must be an array of arrays");
    std::vector<double> r;
    for (const Json& e : row) {
      if (!e.is_number()) fail(std::string("'") + key + "' entries must be numbers");
      r.push_back(e.get<double>());
    }
    out.push_back(std::move(r));
  }
  return out;
}

BodySpec parse_body(const Json& j) {
  check_keys(j, "body", {"kind", "dim", "radius", "diag", "lower", "upper", "half_width", "scale", "normals",
                         "offsets", "vertices", "inner_radius", "diameter", "random_polygon", "base", "a"});
  BodySpec b;
  b.kind = text(j, "kind", "ball");
  b.dim = integer(j, "dim", 2);
  b.radius = number(j, "radius", 1.0);
  b.diag = numbers(j, "diag");
  b.lower = numbers(j, "lower");
  b.upper = numbers(j, "upper");
  b.half_width = number(j, "half_width", 1.0);
  b.scale = number(j, "scale", 1.0);
  b.normals = matrix(j, "normals");
  b.offsets = numbers(j, "offsets");
  b.vertices = matrix(j, "vertices");
  b.inner_radius = number(j, "inner_radius", 0.0);
  b.diameter = number(j, "diameter", 0.0);
  b.polygon_points = integer(j, "random_polygon", 0);
  b.smoothing = number(j, "a", 0.0);
  if (j.contains("base")) b.base = std::make_shared<BodySpec>(parse_body(j.at("base")));

  static const std::set<std::string> kinds{"ball", "ellipsoid", "box", "simplex", "polytope", "smoothed_polytope"};
  if (!kinds.count(b.kind)) fail("unknown body kind '" + b.kind + "'");
  if (b.dim < 1) fail("body dim must be positive");
  if (b.kind == "ellipsoid") {
    if (b.diag.empty()) fail("ellipsoid needs 'diag'");
    b.dim = static_cast<int>(b.diag.size());
  }
  if (b.kind == "box" && (!b.lower.empty() || !b.upper.empty())) {
    if (b.lower.size() != b.upper.size() || b.lower.empty()) fail("box 'lower' and 'upper' must match");
    b.dim = static_cast<int>(b.lower.size());
  }
  if (b.kind == "polytope") {
    if (b.polygon_points > 0) {
      b.dim = 2;
    } else {
      if (b.normals.empty() || b.normals.size() != b.offsets.size())
        fail("polytope needs matching 'normals' and 'offsets', or 'random_polygon'");
      if (!(b.inner_radius > 0.0) || !(b.diameter > 0.0)) fail("polytope needs 'inner_radius' and 'diameter'");
      b.dim = static_cast<int>(b.normals.front().size());
    }
  }
  if (b.kind == "smoothed_polytope") {
    if (!b.base) fail("smoothed_polytope needs a 'base' body");
    b.dim = b.base->dim;
    if (b.base->kind != "box" && b.base->kind != "simplex" && b.base->kind != "polytope")
      fail("smoothed_polytope base must be a box, simplex or polytope");
    if (b.smoothing < 0.0) fail("smoothing scale 'a' must be positive");
  }
  // Shapes that carry their own dimension must agree with an explicit 'dim'.
  if (j.contains("dim") && b.dim != integer(j, "dim", 2)) fail("body 'dim' disagrees with the shape data");
  return b;
}

LossSpec parse_loss(const Json& j) {
  check_keys(j, "loss", {"family", "mode", "G", "directions", "centers", "boundaries", "num_segments", "lambda",
                         "noise", "offset"});
  LossSpec l;
  l.family = text(j, "family", "linear");
  l.mode = text(j, "mode", "stationary");
  if (j.contains("G")) l.lipschitz = number(j, "G", 1.0);
  l.directions = matrix(j, "directions");
  l.centers = matrix(j, "centers");
  for (double v : numbers(j, "boundaries")) {
    if (v != std::floor(v)) fail("segment boundaries must be integers");
    l.boundaries.push_back(static_cast<int>(v));
  }
  l.num_segments = integer(j, "num_segments", 0);
  l.lambda = number(j, "lambda", 1.0);
  l.noise = number(j, "noise", 0.0);
  if (j.contains("offset")) l.offset = number(j, "offset", 0.0);

  if (l.family != "linear" && l.family != "quadratic") fail("loss family must be linear or quadratic");
  if (l.mode != "stationary" && l.mode != "piecewise") fail("loss mode must be stationary or piecewise");
  if (l.lipschitz && !(*l.lipschitz > 0.0)) fail("G must be positive");
  if (!(l.lambda > 0.0)) fail("lambda must be positive");
  if (l.noise < 0.0) fail("noise must be non-negative");
  if (l.num_segments < 0) fail("num_segments must be non-negative");
  if (l.mode == "stationary" && (!l.boundaries.empty() || l.num_segments > 1))
    fail("stationary losses cannot have segments");
  return l;
}

AlgorithmSpec parse_algorithm(const Json& j) {
  check_keys(j, "algorithm", {"name", "schedule", "epsilon", "normalization"});
  AlgorithmSpec a;
  a.name = text(j, "name", "algorithm1");
  a.schedule = schedule_from_string(text(j, "schedule", "convex"));
  if (j.contains("epsilon")) {
    const Json& e = j.at("epsilon");
    if (e.is_string()) {
      if (e.get<std::string>() != "1/logT") fail("epsilon must be a number or \"1/logT\"");
      a.epsilon_log_t = true;
    } else {
      a.epsilon = number(j, "epsilon", 1.0);
      if (!(a.epsilon > 0.0)) fail("epsilon must be positive");
    }
  }
  if (j.contains("normalization")) {
    a.normalization = number(j, "normalization", 0.0);
    if (!(*a.normalization > 0.0)) fail("normalization must be positive");
  }
  static const std::set<std::string> names{"algorithm1", "flh", "eflh", "baseline_projected_ogd"};
  if (!names.count(a.name)) fail("unknown algorithm '" + a.name + "'");
  return a;
}

Json body_json(const BodySpec& b) {
  Json j;
  j["kind"] = b.kind;
  j["dim"] = b.dim;
  if (b.kind == "ball") j["radius"] = b.radius;
  if (b.kind == "ellipsoid") j["diag"] = b.diag;
  if (b.kind == "box") {
    if (b.lower.empty()) {
      j["half_width"] = b.half_width;
    } else {
      j["lower"] = b.lower;
      j["upper"] = b.upper;
    }
  }
  if (b.kind == "simplex") j["scale"] = b.scale;
  if (b.kind == "polytope") {
    if (b.polygon_points > 0) {
      j["random_polygon"] = b.polygon_points;
    } else {
      j["normals"] = b.normals;
      j["offsets"] = b.offsets;
      j["inner_radius"] = b.inner_radius;
      j["diameter"] = b.diameter;
      if (!b.vertices.empty()) j["vertices"] = b.vertices;
    }
  }
  if (b.kind == "smoothed_polytope") {
    j["base"] = body_json(*b.base);
    j["a"] = b.smoothing;
  }
  return j;
}

Vec to_vec(const std::vector<double>& v) { return Eigen::Map<const Vec>(v.data(), static_cast<Eigen::Index>(v.size())); }

std::shared_ptr<const PolytopeBody> build_polytope(const BodySpec& spec, std::uint64_t seed) {
  if (spec.kind == "box") {
    if (spec.lower.empty()) return make_box(spec.dim, spec.half_width);
    return make_box(to_vec(spec.lower), to_vec(spec.upper));
  }
  if (spec.kind == "simplex") return make_simplex(spec.dim, spec.scale);
  if (spec.polygon_points > 0) {
    CounterRng rng = CounterRng(seed).split("body");
    return make_random_polygon(spec.polygon_points, rng);
  }
  const int m = static_cast<int>(spec.normals.size());
  Mat normals(m, spec.dim);
  for (int i = 0; i < m; ++i) {
    if (static_cast<int>(spec.normals[i].size()) != spec.dim) fail("polytope rows must share one dimension");
    normals.row(i) = to_vec(spec.normals[i]).transpose();
  }
  PolytopeBody::Options opts;
  for (const auto& v : spec.vertices) opts.vertices.push_back(to_vec(v));
  return make_polytope(std::move(normals), to_vec(spec.offsets), spec.inner_radius, spec.diameter, std::move(opts));
}

}  // namespace

ExperimentConfig parse_config(const Json& doc) {
  check_keys(doc, "config", {"name", "T", "seed", "body", "loss", "algorithm", "meta", "estimator", "output"});
  ExperimentConfig cfg;
  cfg.name = text(doc, "name", "experiment");
  if (cfg.name.empty() || cfg.name.find('/') != std::string::npos) fail("name must be a plain file stem");
  cfg.horizon = integer(doc, "T", 100);
  if (cfg.horizon < 1) fail("T must be at least 1");
  if (doc.contains("seed")) {
    const Json& s = doc.at("seed");
    if (!s.is_number_unsigned() && !(s.is_number_integer() && s.get<long long>() >= 0))
      fail("seed must be a non-negative integer");
    cfg.seed = s.get<std::uint64_t>();
  }
  if (doc.contains("body")) cfg.body = parse_body(doc.at("body"));
  if (doc.contains("loss")) cfg.loss = parse_loss(doc.at("loss"));
  if (doc.contains("algorithm")) cfg.algorithm = parse_algorithm(doc.at("algorithm"));
  if (doc.contains("meta")) {
    const std::string meta = text(doc, "meta", "none");
    if (meta != "none" && meta != "flh" && meta != "eflh") fail("meta must be none, flh or eflh");
    if (meta != "none") {
      if (doc.contains("algorithm") && doc.at("algorithm").contains("name") && cfg.algorithm.name != meta)
        fail("'meta' contradicts 'algorithm.name'");
      cfg.algorithm.name = meta;
    }
  }
  if (doc.contains("estimator")) {
    const Json& e = doc.at("estimator");
    check_keys(e, "estimator", {"kind", "beta"});
    cfg.estimator.kind = estimator_from_string(text(e, "kind", "finite_difference"));
    cfg.estimator.beta = number(e, "beta", 0.0);
  }
  if (doc.contains("output")) {
    const Json& o = doc.at("output");
    check_keys(o, "output", {"dir", "full_interval_scan"});
    cfg.output.dir = text(o, "dir", "");
    if (o.contains("full_interval_scan")) {
      if (!o.at("full_interval_scan").is_boolean()) fail("full_interval_scan must be a boolean");
      cfg.output.full_interval_scan = o.at("full_interval_scan").get<bool>();
    }
  }
  for (std::size_t i = 0; i < cfg.loss.boundaries.size(); ++i) {
    const int b = cfg.loss.boundaries[i];
    if (b < 2 || b > cfg.horizon) fail("segment boundaries must lie in [2, T]");
    if (i > 0 && b <= cfg.loss.boundaries[i - 1]) fail("segment boundaries must be strictly increasing");
  }
  if (cfg.algorithm.name == "flh" && cfg.loss.family != "quadratic") fail("flh needs strongly convex (quadratic) losses");
  if (cfg.algorithm.schedule == Schedule::strongly_convex && cfg.loss.family != "quadratic")
    fail("strongly_convex schedule needs quadratic losses");
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io, "cannot open config '" + path + "'");
  Json doc;
  try {
    doc = Json::parse(in);
  } catch (const Json::exception& e) {
    fail("config '" + path + "' is not valid JSON: " + e.what());
  }
  return parse_config(doc);
}

Json to_json(const ExperimentConfig& cfg) {
  Json j;
  j["name"] = cfg.name;
  j["T"] = cfg.horizon;
  j["seed"] = cfg.seed;
  j["body"] = body_json(cfg.body);
  Json l;
  l["family"] = cfg.loss.family;
  l["mode"] = cfg.loss.mode;
  if (cfg.loss.lipschitz) l["G"] = *cfg.loss.lipschitz;
  if (!cfg.loss.directions.empty()) l["directions"] = cfg.loss.directions;
  if (!cfg.loss.centers.empty()) l["centers"] = cfg.loss.centers;
  if (!cfg.loss.boundaries.empty()) l["boundaries"] = cfg.loss.boundaries;
  if (cfg.loss.num_segments > 0) l["num_segments"] = cfg.loss.num_segments;
  l["lambda"] = cfg.loss.lambda;
  l["noise"] = cfg.loss.noise;
  if (cfg.loss.offset) l["offset"] = *cfg.loss.offset;
  j["loss"] = l;
  Json a;
  a["name"] = cfg.algorithm.name;
  a["schedule"] = to_string(cfg.algorithm.schedule);
  if (cfg.algorithm.epsilon_log_t) {
    a["epsilon"] = "1/logT";
  } else {
    a["epsilon"] = cfg.algorithm.epsilon;
  }
  if (cfg.algorithm.normalization) a["normalization"] = *cfg.algorithm.normalization;
  j["algorithm"] = a;
  j["estimator"] = Json{{"kind", to_string(cfg.estimator.kind)}, {"beta", cfg.estimator.beta}};
  j["output"] = Json{{"dir", cfg.output.dir}, {"full_interval_scan", cfg.output.full_interval_scan}};
  return j;
}

std::string config_hash(const ExperimentConfig& cfg) {
  Json j = to_json(cfg);
  j.erase("output");  // where results go does not change them
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(j.dump())));
  return buf;
}

std::shared_ptr<const ConvexBody> build_body(const BodySpec& spec, int horizon, std::uint64_t seed) {
  if (spec.kind == "ball") return make_ball(spec.dim, spec.radius);
  if (spec.kind == "ellipsoid") return make_ellipsoid(to_vec(spec.diag));
  if (spec.kind == "box" || spec.kind == "simplex" || spec.kind == "polytope") return build_polytope(spec, seed);
  if (spec.kind == "smoothed_polytope") {
    const double T = std::max(horizon, 1);
    const double a = spec.smoothing > 0.0 ? spec.smoothing : T * T * T;
    return make_smoothed(build_polytope(*spec.base, seed), a, /*share_counter=*/false);
  }
  fail("unknown body kind '" + spec.kind + "'");
}

std::vector<std::string> builtin_config_names() { return {"negative_control", "smoke"}; }

Json builtin_config(const std::string& name) {
  if (name == "negative_control") {
    // Stationary OGD with a 1/sqrt(T) step facing a sign flip at T/2: its regret on
    // the second half grows linearly, which is what adaptive methods avoid.
    return Json::parse(R"({
      "name": "negative_control",
      "T": 4096,
      "seed": 1,
      "body": {"kind": "ball", "dim": 2, "radius": 1.0},
      "loss": {"family": "linear", "mode": "piecewise", "G": 1.0,
               "directions": [[1.0, 0.0], [-1.0, 0.0]], "num_segments": 2},
      "algorithm": {"name": "baseline_projected_ogd", "schedule": "convex"}
    })");
  }
  if (name == "smoke") {
    return Json::parse(R"({
      "name": "smoke",
      "T": 100,
      "seed": 1,
      "body": {"kind": "ball", "dim": 2, "radius": 1.0},
      "loss": {"family": "linear", "mode": "stationary", "G": 1.0, "directions": [[1.0, 0.0]]},
      "algorithm": {"name": "algorithm1", "schedule": "convex"},
      "estimator": {"kind": "finite_difference"}
    })");
  }
  fail("unknown built-in config '" + name + "'");
}

double effective_epsilon(const AlgorithmSpec& spec, int horizon) {
  if (!spec.epsilon_log_t) return spec.epsilon;
  if (horizon < 3) return 1.0;
  return 1.0 / std::log(static_cast<double>(horizon));
}

}  // namespace goco::bench
