#include "thinflow/harness/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>

#include "thinflow/error.hpp"

namespace thinflow {

using nlohmann::json;

MapPtr MapSpec::build_base() const {
  if (base == "segment") return segment_map();
  if (base == "disk") return disk_identity_map();
  throw ConfigError("map", "unknown base map '" + base + "'");
}

MapPtr MapSpec::build() const {
  MapPtr b = build_base();
  return eps > 0.0 ? epsilon_map(b, eps) : b;
}

namespace {

void require_keys(const json& j, const std::string& path, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) throw ConfigError(path.empty() ? "<root>" : path, "expected an object");
  std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [k, v] : j.items())
    if (!ok.count(k)) throw ConfigError(path.empty() ? k : path + "." + k, "unknown key");
}

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

double get_number(const json& j, const std::string& path) {
  if (!j.is_number()) throw ConfigError(path, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw ConfigError(path, "expected a finite number");
  return v;
}

Vec2 get_point(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 2) throw ConfigError(path, "expected [x, y]");
  return {get_number(j[0], path + "[0]"), get_number(j[1], path + "[1]")};
}

std::vector<double> get_numbers(const json& j, const std::string& path) {
  if (!j.is_array()) throw ConfigError(path, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(get_number(j[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

MapSpec parse_map(const json& j) {
  MapSpec m;
  if (j.is_string()) {
    m.base = j.get<std::string>();
    if (m.base != "segment" && m.base != "disk") throw ConfigError("map", "expected \"segment\", \"disk\" or {\"epsilon\": ...}");
    return m;
  }
  require_keys(j, "map", {"epsilon"});
  if (!j.contains("epsilon")) throw ConfigError("map.epsilon", "missing");
  const json& e = j["epsilon"];
  require_keys(e, "map.epsilon", {"base", "eps"});
  if (!e.contains("base") || !e["base"].is_string()) throw ConfigError("map.epsilon.base", "expected a string");
  m.base = e["base"].get<std::string>();
  if (m.base != "segment" && m.base != "disk") throw ConfigError("map.epsilon.base", "expected \"segment\" or \"disk\"");
  if (!e.contains("eps")) throw ConfigError("map.epsilon.eps", "missing");
  m.eps = get_number(e["eps"], "map.epsilon.eps");
  if (!(m.eps > 0.0)) throw ConfigError("map.epsilon.eps", "must be positive");
  return m;
}

}  // namespace

void RunConfig::validate() const {
  if (!(h > 0.0)) throw ConfigError("h", "must be positive");
  if (!(delta > 0.0)) throw ConfigError("delta", "must be positive");
  if (delta < h) throw ConfigError("delta", "must be at least h");
  if (vorticity.bumps.empty()) throw ConfigError("vorticity.bumps", "empty support");
  for (std::size_t i = 0; i < vorticity.bumps.size(); ++i) {
    const auto p = "vorticity.bumps[" + std::to_string(i) + "]";
    if (!(vorticity.bumps[i].radius > 0.0)) throw ConfigError(p + ".radius", "must be positive");
  }
  if (sweep.eps.empty()) throw ConfigError("sweep.eps", "empty sweep");
  for (std::size_t i = 0; i < sweep.eps.size(); ++i) {
    const auto p = "sweep.eps[" + std::to_string(i) + "]";
    if (!(sweep.eps[i] > 0.0)) throw ConfigError(p, "must be positive");
    if (i > 0 && !(sweep.eps[i] < sweep.eps[i - 1])) throw ConfigError(p, "eps list must be strictly decreasing");
  }
  if (!(sweep.R > 0.0)) throw ConfigError("sweep.R", "must be positive");
  if (!(sweep.T >= 0.0)) throw ConfigError("sweep.T", "must be nonnegative");
  if (!(sweep.dt > 0.0)) throw ConfigError("sweep.dt", "must be positive");
  const double steps = sweep.T / sweep.dt;
  if (std::abs(steps - std::round(steps)) > 1e-9 * std::max(1.0, steps))
    throw ConfigError("sweep.dt", "T must be an integer multiple of dt");
  for (std::size_t i = 0; i < sweep.snapshots.size(); ++i) {
    const auto p = "sweep.snapshots[" + std::to_string(i) + "]";
    const double t = sweep.snapshots[i];
    if (!(t >= 0.0 && t <= sweep.T + 1e-12)) throw ConfigError(p, "must lie in [0, T]");
    const double k = t / sweep.dt;
    if (std::abs(k - std::round(k)) > 1e-9 * std::max(1.0, k)) throw ConfigError(p, "must be a multiple of dt");
  }
  if (quadrature.n_theta < 8) throw ConfigError("quadrature.n_theta", "must be at least 8");
  if (!(quadrature.max_panel > 0.0)) throw ConfigError("quadrature.max_panel", "must be positive");
  if (arc.kind == "sampled" && map.base == "segment")
    throw ConfigError("arc", "sampled arcs need an externally supplied map");
  if (output.empty()) throw ConfigError("output", "must not be empty");
}

json RunConfig::to_json() const {
  json j;
  if (map.eps > 0.0)
    j["map"] = {{"epsilon", {{"base", map.base}, {"eps", map.eps}}}};
  else
    j["map"] = map.base;
  json a = {{"kind", arc.kind}};
  if (arc.kind == "sampled") {
    a["points"] = json::array();
    for (const auto& p : arc.points) a["points"].push_back({p.x, p.y});
  }
  j["arc"] = a;
  json bumps = json::array();
  for (const auto& b : vorticity.bumps)
    bumps.push_back({{"center", {b.center.x, b.center.y}}, {"radius", b.radius}, {"amplitude", b.amplitude}});
  j["vorticity"] = {{"bumps", bumps}};
  j["gamma"] = gamma;
  j["h"] = h;
  j["delta"] = delta;
  j["sweep"] = {{"eps", sweep.eps}, {"R", sweep.R}, {"T", sweep.T}, {"dt", sweep.dt}, {"snapshots", sweep.snapshots}};
  j["quadrature"] = {{"n_theta", quadrature.n_theta}, {"max_panel", quadrature.max_panel}};
  j["output"] = output;
  j["seed"] = seed;
  return j;
}

RunConfig default_config() {
  RunConfig c;
  c.vorticity.bumps.push_back({{0.3, 1.1}, 0.5, 2.0});
  return c;
}

RunConfig parse_config(const json& j) {
  require_keys(j, "", {"map", "arc", "vorticity", "gamma", "h", "delta", "sweep", "quadrature", "output", "seed"});
  RunConfig c = default_config();
  if (j.contains("map")) c.map = parse_map(j["map"]);
  if (j.contains("arc")) {
    const json& a = j["arc"];
    require_keys(a, "arc", {"kind", "points"});
    if (!a.contains("kind") || !a["kind"].is_string()) throw ConfigError("arc.kind", "expected a string");
    c.arc.kind = a["kind"].get<std::string>();
    if (c.arc.kind == "sampled") {
      if (!a.contains("points") || !a["points"].is_array()) throw ConfigError("arc.points", "expected an array of points");
      for (std::size_t i = 0; i < a["points"].size(); ++i)
        c.arc.points.push_back(get_point(a["points"][i], "arc.points[" + std::to_string(i) + "]"));
      try {
        sampled_arc(c.arc.points);
      } catch (const DomainError& e) {
        throw ConfigError("arc.points", e.what());
      }
    } else if (c.arc.kind != "segment") {
      throw ConfigError("arc.kind", "expected \"segment\" or \"sampled\"");
    } else if (a.contains("points")) {
      throw ConfigError("arc.points", "only allowed for sampled arcs");
    }
  }
  if (j.contains("vorticity")) {
    const json& v = j["vorticity"];
    require_keys(v, "vorticity", {"bumps"});
    if (!v.contains("bumps") || !v["bumps"].is_array()) throw ConfigError("vorticity.bumps", "expected an array");
    c.vorticity.bumps.clear();
    for (std::size_t i = 0; i < v["bumps"].size(); ++i) {
      const std::string p = "vorticity.bumps[" + std::to_string(i) + "]";
      const json& b = v["bumps"][i];
      require_keys(b, p, {"center", "radius", "amplitude"});
      for (const char* key : {"center", "radius", "amplitude"})
        if (!b.contains(key)) throw ConfigError(join(p, key), "missing");
      c.vorticity.bumps.push_back(
          {get_point(b["center"], p + ".center"), get_number(b["radius"], p + ".radius"), get_number(b["amplitude"], p + ".amplitude")});
    }
  }
  if (j.contains("gamma")) c.gamma = get_number(j["gamma"], "gamma");
  if (j.contains("h")) c.h = get_number(j["h"], "h");
  c.delta = 2.0 * c.h;
  if (j.contains("delta")) c.delta = get_number(j["delta"], "delta");
  if (j.contains("sweep")) {
    const json& s = j["sweep"];
    require_keys(s, "sweep", {"eps", "R", "T", "dt", "snapshots"});
    if (s.contains("eps")) c.sweep.eps = get_numbers(s["eps"], "sweep.eps");
    if (s.contains("R")) c.sweep.R = get_number(s["R"], "sweep.R");
    if (s.contains("T")) c.sweep.T = get_number(s["T"], "sweep.T");
    if (s.contains("dt")) c.sweep.dt = get_number(s["dt"], "sweep.dt");
    if (s.contains("snapshots")) c.sweep.snapshots = get_numbers(s["snapshots"], "sweep.snapshots");
  }
  if (j.contains("quadrature")) {
    const json& q = j["quadrature"];
    require_keys(q, "quadrature", {"n_theta", "max_panel"});
    if (q.contains("n_theta")) {
      if (!q["n_theta"].is_number_integer() || q["n_theta"].get<long long>() < 0)
        throw ConfigError("quadrature.n_theta", "expected a nonnegative integer");
      c.quadrature.n_theta = q["n_theta"].get<std::size_t>();
    }
    if (q.contains("max_panel")) c.quadrature.max_panel = get_number(q["max_panel"], "quadrature.max_panel");
  }
  if (j.contains("output")) {
    if (!j["output"].is_string()) throw ConfigError("output", "expected a string");
    c.output = j["output"].get<std::string>();
  }
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned()) throw ConfigError("seed", "expected a nonnegative integer");
    c.seed = j["seed"].get<std::uint64_t>();
  }
  c.validate();
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("<file>", "cannot open " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("<file>", std::string("parse error: ") + e.what());
  }
  return parse_config(j);
}

std::string config_hash(const RunConfig& cfg) {
  const std::string s = cfg.to_json().dump();
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace thinflow
