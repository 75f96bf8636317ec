#include "qlens/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>

#include "qlens/errors.hpp"

namespace qlens {

using nlohmann::json;

std::string_view to_string(Engine e) {
  switch (e) {
    case Engine::chebyshev: return "chebyshev";
    case Engine::splitstep: return "splitstep";
    case Engine::eikonal: return "eikonal";
    case Engine::lens: return "lens";
  }
  return "unknown";
}

std::optional<Engine> parse_engine(std::string_view name) {
  for (Engine e : {Engine::chebyshev, Engine::splitstep, Engine::eikonal, Engine::lens}) {
    if (to_string(e) == name) return e;
  }
  return std::nullopt;
}

std::vector<double> RunConfig::v0_values() const {
  return sweep.empty() ? std::vector<double>{potential.v0} : sweep;
}

void RunConfig::validate() const {
  auto fail = [](const std::string& msg) { throw ConfigurationError("config: " + msg); };
  if (!(potential.a1 > 0.0) || !(potential.a2 > 0.0)) fail("potential.a1 and a2 must be positive");
  if (std::abs(norm(potential.e1) - 1.0) > 1e-12) fail("potential.e1 must be a unit vector");
  if (!std::isfinite(potential.v0)) fail("potential.v0 must be finite");
  if (!(packet.sigma0 > 0.0)) fail("packet.sigma0 must be positive");
  if (!(packet.v > 0.0)) fail("packet.v must be positive");
  if (!(packet.q_launch < 0.0)) fail("packet.q_launch must be negative");
  if (!(packet.m > 0.0) || !(packet.hbar > 0.0)) fail("packet.m and packet.hbar must be positive");
  grid.validate();
  if (!(time.t_final > 0.0)) fail("time.t_final must be positive");
  if (!(time.dt > 0.0)) fail("time.dt must be positive");
  if (!(time.snapshot_interval > 0.0)) fail("time.snapshot_interval must be positive");
  if (!(solver.tol > 0.0) || solver.tol > 1e-6) fail("solver.tol must lie in (0, 1e-6]");
  if (!(solver.splitstep_dt > 0.0)) fail("solver.splitstep_dt must be positive");
  if (!(solver.boundary_limit > 0.0)) fail("solver.boundary_limit must be positive");
  if (!(eikonal.t_min > 0.0)) fail("eikonal.t_min must be positive");
  if (eikonal.receivers < 16) fail("eikonal.receivers must be at least 16");
  if (engines.empty()) fail("at least one engine is required");
  if (std::set<Engine>(engines.begin(), engines.end()).size() != engines.size()) {
    fail("engines must be distinct");
  }
  std::set<double> seen;
  for (double v : sweep) {
    if (!std::isfinite(v)) fail("sweep values must be finite");
    if (!seen.insert(v).second) fail("sweep values must be distinct");
  }
  if (output.prefix.empty()) fail("output.prefix must not be empty");
}

namespace {

void reject_unknown(const json& obj, std::initializer_list<std::string_view> keys,
                    const std::string& where) {
  if (!obj.is_object()) throw ConfigurationError("config: " + where + " must be an object");
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (std::find(keys.begin(), keys.end(), it.key()) == keys.end()) {
      throw ConfigurationError("config: unknown key " + where + "." + it.key());
    }
  }
}

template <class T>
void read(const json& obj, const char* key, T& out, const std::string& where) {
  if (!obj.contains(key)) return;
  try {
    out = obj.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigurationError("config: bad value for " + where + "." + key + ": " + e.what());
  }
}

Vec2 read_pair(const json& obj, const char* key, Vec2 fallback, const std::string& where) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
    throw ConfigurationError("config: " + where + "." + key + " must be a pair of numbers");
  }
  return {v[0].get<double>(), v[1].get<double>()};
}

}  // namespace

RunConfig config_from_json(const json& j) {
  RunConfig c;
  reject_unknown(j, {"potential", "packet", "grid", "time", "solver", "eikonal", "engines", "engine",
                     "sweep", "output"},
                 "root");
  if (j.contains("potential")) {
    const json& p = j.at("potential");
    reject_unknown(p, {"v0", "e1", "a1", "a2"}, "potential");
    read(p, "v0", c.potential.v0, "potential");
    c.potential.e1 = read_pair(p, "e1", c.potential.e1, "potential");
    read(p, "a1", c.potential.a1, "potential");
    read(p, "a2", c.potential.a2, "potential");
  }
  if (j.contains("packet")) {
    const json& p = j.at("packet");
    reject_unknown(p, {"sigma0", "v", "q_launch", "m", "hbar"}, "packet");
    read(p, "sigma0", c.packet.sigma0, "packet");
    read(p, "v", c.packet.v, "packet");
    read(p, "q_launch", c.packet.q_launch, "packet");
    read(p, "m", c.packet.m, "packet");
    read(p, "hbar", c.packet.hbar, "packet");
  }
  if (j.contains("grid")) {
    const json& g = j.at("grid");
    reject_unknown(g, {"x1", "x2", "n1", "n2"}, "grid");
    const Vec2 x1 = read_pair(g, "x1", {c.grid.x1_min, c.grid.x1_max}, "grid");
    const Vec2 x2 = read_pair(g, "x2", {c.grid.x2_min, c.grid.x2_max}, "grid");
    c.grid.x1_min = x1.x;
    c.grid.x1_max = x1.y;
    c.grid.x2_min = x2.x;
    c.grid.x2_max = x2.y;
    read(g, "n1", c.grid.n1, "grid");
    read(g, "n2", c.grid.n2, "grid");
  }
  if (j.contains("time")) {
    const json& t = j.at("time");
    reject_unknown(t, {"t_final", "dt", "snapshot_interval"}, "time");
    read(t, "t_final", c.time.t_final, "time");
    read(t, "dt", c.time.dt, "time");
    read(t, "snapshot_interval", c.time.snapshot_interval, "time");
  }
  if (j.contains("solver")) {
    const json& s = j.at("solver");
    reject_unknown(s, {"tol", "splitstep_dt", "boundary_limit"}, "solver");
    read(s, "tol", c.solver.tol, "solver");
    read(s, "splitstep_dt", c.solver.splitstep_dt, "solver");
    read(s, "boundary_limit", c.solver.boundary_limit, "solver");
  }
  if (j.contains("eikonal")) {
    const json& e = j.at("eikonal");
    reject_unknown(e, {"t_min", "receivers"}, "eikonal");
    read(e, "t_min", c.eikonal.t_min, "eikonal");
    read(e, "receivers", c.eikonal.receivers, "eikonal");
  }
  if (j.contains("engine") && j.contains("engines")) {
    throw ConfigurationError("config: give either engine or engines, not both");
  }
  std::vector<std::string> names;
  if (j.contains("engine")) {
    std::string one;
    read(j, "engine", one, "root");
    names.push_back(one);
  } else if (j.contains("engines")) {
    read(j, "engines", names, "root");
  }
  if (!names.empty()) {
    c.engines.clear();
    for (const auto& n : names) {
      const auto e = parse_engine(n);
      if (!e) throw ConfigurationError("config: unknown engine '" + n + "'");
      c.engines.push_back(*e);
    }
  }
  read(j, "sweep", c.sweep, "root");
  if (j.contains("output")) {
    const json& o = j.at("output");
    reject_unknown(o, {"dir", "prefix", "snapshots"}, "output");
    read(o, "dir", c.output.dir, "output");
    read(o, "prefix", c.output.prefix, "output");
    read(o, "snapshots", c.output.snapshots, "output");
  }
  return c;
}

nlohmann::ordered_json config_to_json(const RunConfig& c) {
  nlohmann::ordered_json j;
  j["potential"] = {{"v0", c.potential.v0},
                    {"e1", {c.potential.e1.x, c.potential.e1.y}},
                    {"a1", c.potential.a1},
                    {"a2", c.potential.a2}};
  j["packet"] = {{"sigma0", c.packet.sigma0},
                 {"v", c.packet.v},
                 {"q_launch", c.packet.q_launch},
                 {"m", c.packet.m},
                 {"hbar", c.packet.hbar}};
  j["grid"] = {{"x1", {c.grid.x1_min, c.grid.x1_max}},
               {"x2", {c.grid.x2_min, c.grid.x2_max}},
               {"n1", c.grid.n1},
               {"n2", c.grid.n2}};
  j["time"] = {{"t_final", c.time.t_final},
               {"dt", c.time.dt},
               {"snapshot_interval", c.time.snapshot_interval}};
  j["solver"] = {{"tol", c.solver.tol},
                 {"splitstep_dt", c.solver.splitstep_dt},
                 {"boundary_limit", c.solver.boundary_limit}};
  j["eikonal"] = {{"t_min", c.eikonal.t_min}, {"receivers", c.eikonal.receivers}};
  auto engines = nlohmann::ordered_json::array();
  for (Engine e : c.engines) engines.push_back(std::string(to_string(e)));
  j["engines"] = engines;
  j["sweep"] = c.sweep;
  j["output"] = {{"dir", c.output.dir}, {"prefix", c.output.prefix},
                 {"snapshots", c.output.snapshots}};
  return j;
}

void apply_override(json& j, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos || eq == 0) {
    throw ConfigurationError("override '" + std::string(assignment) + "' is not key=value");
  }
  const std::string key(assignment.substr(0, eq));
  const std::string text(assignment.substr(eq + 1));
  json value = json::parse(text, nullptr, false);
  if (value.is_discarded()) value = text;

  json* node = &j;
  std::size_t start = 0;
  while (true) {
    const auto dot = key.find('.', start);
    const std::string part = key.substr(start, dot - start);
    if (part.empty()) throw ConfigurationError("override key '" + key + "' has an empty part");
    if (dot == std::string::npos) {
      (*node)[part] = value;
      return;
    }
    if (!node->contains(part)) (*node)[part] = json::object();
    node = &(*node)[part];
    if (!node->is_object()) throw ConfigurationError("override key '" + key + "' crosses a value");
    start = dot + 1;
  }
}

RunConfig load_config(const std::optional<std::filesystem::path>& path,
                      const std::vector<std::string>& overrides) {
  json j = json::object();
  if (path) {
    std::ifstream is(*path);
    if (!is) throw ConfigurationError("config: cannot open " + path->string());
    try {
      j = json::parse(is);
    } catch (const json::exception& e) {
      throw ConfigurationError("config: " + path->string() + ": " + e.what());
    }
  }
  for (const auto& o : overrides) apply_override(j, o);
  RunConfig c = config_from_json(j);
  c.validate();
  return c;
}

std::uint64_t config_hash(const RunConfig& c) {
  const std::string text = config_to_json(c).dump();
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  return h;
}

std::string config_hash_hex(const RunConfig& c) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(config_hash(c)));
  return buf;
}

}  // namespace qlens
