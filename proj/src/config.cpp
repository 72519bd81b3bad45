#include "blowup/config.hpp"

#include <charconv>
#include <cmath>
#include <map>
#include <sstream>

#include "blowup/errors.hpp"

namespace blowup {
namespace {

struct Entry {
  std::string value;
  std::string where;
};

const std::map<std::string, std::vector<std::string>>& known_keys() {
  static const std::map<std::string, std::vector<std::string>> keys = {
      {"params", {"p", "a", "N"}},
      {"run", {"scenario", "seed", "output"}},
      {"initial", {"kind", "c", "amplitude", "width", "path"}},
      {"grid", {"geometry", "extent", "resolution"}},
      {"solver", {"rel_tol", "s_max", "T", "ds", "s_span", "dt_safety", "dt_max", "M_stop", "t_max"}},
      {"functional", {"m0", "theta", "A", "R"}},
  };
  return keys;
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw ConfigError(where + ": " + what);
}

void check_key(const std::string& section, const std::string& key, const std::string& where) {
  const auto& keys = known_keys();
  const auto it = keys.find(section);
  if (it == keys.end()) fail(where, "unknown section '" + section + "'");
  for (const auto& k : it->second) {
    if (k == key) return;
  }
  fail(where, "unknown key '" + key + "' in section [" + section + "]");
}

void put(std::map<std::string, Entry>& table, const std::string& section, const std::string& key,
         const std::string& value, const std::string& where) {
  check_key(section, key, where);
  table[section + "." + key] = {value, where};
}

class Reader {
 public:
  explicit Reader(std::map<std::string, Entry> table) : table_(std::move(table)) {}

  bool has(const std::string& name) const { return table_.count(name) != 0; }

  const Entry& entry(const std::string& name) const { return table_.at(name); }

  void real(const std::string& name, double& out) const {
    if (!has(name)) return;
    const Entry& e = entry(name);
    double v = 0.0;
    const char* first = e.value.data();
    const char* last = first + e.value.size();
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last || !std::isfinite(v)) {
      fail(e.where, "'" + name + "' expects a finite number, got '" + e.value + "'");
    }
    out = v;
  }

  template <class Int>
  void integer(const std::string& name, Int& out) const {
    if (!has(name)) return;
    const Entry& e = entry(name);
    Int v{};
    const char* first = e.value.data();
    const char* last = first + e.value.size();
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last) {
      fail(e.where, "'" + name + "' expects an integer, got '" + e.value + "'");
    }
    out = v;
  }

  void text(const std::string& name, std::string& out) const {
    if (has(name)) out = entry(name).value;
  }

  std::string where(const std::string& name) const { return has(name) ? entry(name).where : "config"; }

 private:
  std::map<std::string, Entry> table_;
};

}  // namespace

std::string to_string(Scenario scenario) {
  switch (scenario) {
    case Scenario::ode: return "ode";
    case Scenario::physical: return "physical";
    case Scenario::similarity: return "similarity";
    case Scenario::verify: return "verify";
  }
  return "verify";
}

std::string to_string(InitialKind kind) {
  switch (kind) {
    case InitialKind::constant: return "constant";
    case InitialKind::gaussian: return "gaussian";
    case InitialKind::profile: return "profile";
    case InitialKind::file: return "file";
  }
  return "gaussian";
}

RunConfig parse_config(std::string_view text, const std::vector<std::string>& overrides) {
  std::map<std::string, Entry> table;
  std::string section;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    const std::string_view raw = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    const std::string where = "line " + std::to_string(line_no);
    std::string line = trim(raw.substr(0, raw.find_first_of("#;")));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') fail(where, "unterminated section header");
      section = trim(std::string_view(line).substr(1, line.size() - 2));
      if (!known_keys().count(section)) fail(where, "unknown section '" + section + "'");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) fail(where, "expected 'key = value'");
    const std::string key = trim(std::string_view(line).substr(0, eq));
    const std::string value = trim(std::string_view(line).substr(eq + 1));
    if (section.empty()) fail(where, "key '" + key + "' outside any section");
    if (table.count(section + "." + key)) fail(where, "duplicate key '" + key + "'");
    put(table, section, key, value, where);
  }
  for (const auto& o : overrides) {
    const std::string where = "override '" + o + "'";
    const auto eq = o.find('=');
    const auto dot = o.find('.');
    if (eq == std::string::npos || dot == std::string::npos || dot > eq) {
      fail(where, "expected section.key=value");
    }
    put(table, trim(std::string_view(o).substr(0, dot)), trim(std::string_view(o).substr(dot + 1, eq - dot - 1)),
        trim(std::string_view(o).substr(eq + 1)), where);
  }

  const Reader in(std::move(table));
  RunConfig cfg;

  if (!in.has("run.scenario")) fail("config", "missing required key 'run.scenario'");
  const std::string scenario = in.entry("run.scenario").value;
  if (scenario == "ode") cfg.scenario = Scenario::ode;
  else if (scenario == "physical") cfg.scenario = Scenario::physical;
  else if (scenario == "similarity") cfg.scenario = Scenario::similarity;
  else if (scenario == "verify") cfg.scenario = Scenario::verify;
  else fail(in.where("run.scenario"), "'run.scenario' must be ode, physical, similarity or verify");

  if (cfg.scenario != Scenario::verify) {
    for (const char* k : {"params.p", "params.a", "params.N"}) {
      if (!in.has(k)) fail("config", std::string("missing required key '") + k + "'");
    }
  }
  in.real("params.p", cfg.params.p);
  in.real("params.a", cfg.params.a);
  in.integer("params.N", cfg.params.N);
  try {
    validate(cfg.params);
  } catch (const ConfigError& e) {
    fail(in.where("params.p"), e.what());
  }

  in.integer("run.seed", cfg.seed);
  in.text("run.output", cfg.output);
  if (cfg.output.empty()) fail(in.where("run.output"), "'run.output' must not be empty");

  if (in.has("initial.kind")) {
    const std::string kind = in.entry("initial.kind").value;
    if (kind == "constant") cfg.initial.kind = InitialKind::constant;
    else if (kind == "gaussian") cfg.initial.kind = InitialKind::gaussian;
    else if (kind == "profile") cfg.initial.kind = InitialKind::profile;
    else if (kind == "file") cfg.initial.kind = InitialKind::file;
    else fail(in.where("initial.kind"), "'initial.kind' must be constant, gaussian, profile or file");
  }
  in.real("initial.c", cfg.initial.c);
  in.real("initial.amplitude", cfg.initial.amplitude);
  in.real("initial.width", cfg.initial.width);
  in.text("initial.path", cfg.initial.path);
  if (!(cfg.initial.width > 0.0)) fail(in.where("initial.width"), "'initial.width' must be positive");
  if (cfg.initial.kind == InitialKind::file && cfg.initial.path.empty()) {
    fail(in.where("initial.kind"), "initial.kind = file needs 'initial.path'");
  }

  if (in.has("grid.geometry")) {
    const std::string g = in.entry("grid.geometry").value;
    if (g == "line") cfg.grid.geometry = Geometry::line;
    else if (g == "radial") cfg.grid.geometry = Geometry::radial;
    else fail(in.where("grid.geometry"), "'grid.geometry' must be line or radial");
  } else if (cfg.params.N > 1) {
    cfg.grid.geometry = Geometry::radial;
  }
  in.real("grid.extent", cfg.grid.extent);
  in.integer("grid.resolution", cfg.grid.resolution);
  if (cfg.grid.resolution < 64) fail(in.where("grid.resolution"), "'grid.resolution' must be >= 64");
  if (!(cfg.grid.extent > 0.0)) fail(in.where("grid.extent"), "'grid.extent' must be positive");
  if (cfg.grid.geometry == Geometry::line && cfg.params.N != 1) {
    fail(in.where("grid.geometry"), "line geometry requires N = 1");
  }

  SolverSpec& sv = cfg.solver;
  in.real("solver.rel_tol", sv.rel_tol);
  in.real("solver.s_max", sv.s_max);
  in.real("solver.T", sv.T);
  in.real("solver.ds", sv.ds);
  in.real("solver.s_span", sv.s_span);
  in.real("solver.dt_safety", sv.dt_safety);
  in.real("solver.dt_max", sv.dt_max);
  in.real("solver.M_stop", sv.M_stop);
  in.real("solver.t_max", sv.t_max);
  auto positive = [&](const char* key, double v) {
    if (!(v > 0.0)) fail(in.where(key), std::string("'") + key + "' must be positive");
  };
  positive("solver.rel_tol", sv.rel_tol);
  positive("solver.ds", sv.ds);
  positive("solver.s_span", sv.s_span);
  positive("solver.dt_safety", sv.dt_safety);
  positive("solver.dt_max", sv.dt_max);
  positive("solver.t_max", sv.t_max);
  if (!(sv.T > 0.0 && sv.T <= 1.0)) fail(in.where("solver.T"), "'solver.T' must lie in (0, 1]");
  if (!(sv.M_stop > 1.0)) fail(in.where("solver.M_stop"), "'solver.M_stop' must exceed 1");

  in.real("functional.m0", cfg.functional.m0);
  in.real("functional.theta", cfg.functional.theta);
  in.real("functional.A", cfg.functional.A);
  in.real("functional.R", cfg.functional.R);
  try {
    validate(cfg.functional);
  } catch (const ConfigError& e) {
    fail(in.where("functional.R"), e.what());
  }
  return cfg;
}

nlohmann::json to_json(const RunConfig& c) {
  return {
      {"params", {{"p", c.params.p}, {"a", c.params.a}, {"N", c.params.N}}},
      {"run", {{"scenario", to_string(c.scenario)}, {"seed", c.seed}, {"output", c.output}}},
      {"initial", {{"kind", to_string(c.initial.kind)}, {"c", c.initial.c}, {"amplitude", c.initial.amplitude},
                   {"width", c.initial.width}, {"path", c.initial.path}}},
      {"grid", {{"geometry", c.grid.geometry == Geometry::line ? "line" : "radial"},
                {"extent", c.grid.extent}, {"resolution", c.grid.resolution}}},
      {"solver", {{"rel_tol", c.solver.rel_tol}, {"s_max", c.solver.s_max}, {"T", c.solver.T},
                  {"ds", c.solver.ds}, {"s_span", c.solver.s_span}, {"dt_safety", c.solver.dt_safety},
                  {"dt_max", c.solver.dt_max}, {"M_stop", c.solver.M_stop}, {"t_max", c.solver.t_max}}},
      {"functional", {{"m0", c.functional.m0}, {"theta", c.functional.theta}, {"A", c.functional.A},
                      {"R", c.functional.R}}},
  };
}

}  // namespace blowup
