#include "bcsgap/config.hpp"

#include "bcsgap/error.hpp"

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

namespace bcs {

namespace {

const std::vector<std::string> kKeys = {
    "epsilon",           "hbar_omega_d",     "mu",                 "n0",
    "u1",                "u2",               "potential.type",     "potential.u0",
    "potential.f_values", "potential.table", "potential.values_file", "dos.type",
    "grid.energy_nodes", "grid.t_min",       "grid.t_max",         "grid.t_points",
    "solver.tol",        "solver.max_iter",  "solver.zero_threshold", "solver.t_tol",
    "quad.tol",          "output.dir",       "output.format"};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
  double out = 0.0;
  const auto* end = v.data() + v.size();
  const auto r = std::from_chars(v.data(), end, out);
  if (r.ec != std::errc() || r.ptr != end) throw ConfigError(key + ": expected a number, got '" + v + "'");
  return out;
}

std::size_t to_count(const std::string& key, const std::string& v) {
  unsigned long long out = 0;
  const auto* end = v.data() + v.size();
  const auto r = std::from_chars(v.data(), end, out);
  if (r.ec != std::errc() || r.ptr != end) throw ConfigError(key + ": expected a nonnegative integer, got '" + v + "'");
  return static_cast<std::size_t>(out);
}

std::vector<double> to_list(const std::string& key, const std::string& v) {
  std::vector<double> out;
  std::string item;
  std::string text = v;
  for (auto& c : text)
    if (c == ',' || c == ';' || c == '\n' || c == '\t') c = ' ';
  std::istringstream is(text);
  while (is >> item) out.push_back(to_double(key, item));
  if (out.empty()) throw ConfigError(key + ": empty list");
  return out;
}

// Shortest text that reads back to the same double.
std::string fmt(double x) {
  char buf[40];
  const auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

std::string join(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + fmt(v[i]);
  return s;
}

}  // namespace

const std::vector<std::string>& config_keys() { return kKeys; }

void refresh_echo(RunConfig& c) {
  auto& e = c.echo;
  e.clear();
  e.emplace_back("epsilon", fmt(c.params.epsilon));
  e.emplace_back("hbar_omega_d", fmt(c.params.hbar_omega_d));
  e.emplace_back("mu", fmt(c.params.mu));
  e.emplace_back("n0", fmt(c.params.n0));
  e.emplace_back("u1", fmt(c.params.u1));
  e.emplace_back("u2", fmt(c.params.u2));
  if (auto* k = std::get_if<ConstantPotential>(&c.potential)) {
    e.emplace_back("potential.type", "constant");
    e.emplace_back("potential.u0", fmt(k->u0));
  } else if (auto* s = std::get_if<SeparablePotential>(&c.potential)) {
    e.emplace_back("potential.type", "separable");
    e.emplace_back("potential.f_values", join(s->f));
  } else {
    e.emplace_back("potential.type", "tabulated");
    e.emplace_back("potential.table", join(std::get<TabulatedPotential>(c.potential).values));
  }
  e.emplace_back("dos.type", c.dos == DosKind::FlatShell ? "flat_shell" : "sqrt_band");
  e.emplace_back("grid.energy_nodes", std::to_string(c.grid.energy_nodes));
  e.emplace_back("grid.t_min", fmt(c.grid.t_min));
  e.emplace_back("grid.t_max", c.grid.t_max > 0.0 ? fmt(c.grid.t_max) : "tau2");
  e.emplace_back("grid.t_points", std::to_string(c.grid.t_points));
  e.emplace_back("solver.tol", c.solver.tol > 0.0 ? fmt(c.solver.tol) : "1e-10*Delta2(0)");
  e.emplace_back("solver.max_iter", std::to_string(c.solver.max_iter));
  e.emplace_back("solver.zero_threshold",
                 c.solver.zero_threshold > 0.0 ? fmt(c.solver.zero_threshold) : "1e-8*Delta2(0)");
  e.emplace_back("solver.t_tol", c.solver.t_tol > 0.0 ? fmt(c.solver.t_tol) : "1e-8*tau2");
  e.emplace_back("quad.tol", fmt(c.quad_tol));
  e.emplace_back("output.dir", c.output.dir.empty() ? "stdout" : c.output.dir);
  e.emplace_back("output.format", c.output.format);
}

RunConfig parse_config(const std::string& text, const std::string& base_dir) {
  std::map<std::string, std::string> kv;
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno) + ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    bool known = false;
    for (const auto& k : kKeys) known = known || k == key;
    if (!known) throw ConfigError(key + ": unknown key (line " + std::to_string(lineno) + ")");
    if (kv.count(key)) throw ConfigError(key + ": given twice (line " + std::to_string(lineno) + ")");
    if (val.empty()) throw ConfigError(key + ": missing value (line " + std::to_string(lineno) + ")");
    kv[key] = val;
  }
  auto get = [&](const std::string& k) -> std::optional<std::string> {
    auto it = kv.find(k);
    return it == kv.end() ? std::nullopt : std::optional<std::string>(it->second);
  };

  RunConfig c;
  auto& p = c.params;
  if (auto v = get("hbar_omega_d")) p.hbar_omega_d = to_double("hbar_omega_d", *v);
  p.epsilon = 1e-3 * p.hbar_omega_d;
  if (auto v = get("epsilon")) p.epsilon = to_double("epsilon", *v);
  if (auto v = get("mu")) p.mu = to_double("mu", *v);
  if (auto v = get("n0")) p.n0 = to_double("n0", *v);
  if (auto v = get("u1")) p.u1 = to_double("u1", *v);
  if (auto v = get("u2")) p.u2 = to_double("u2", *v);
  validate_params(p);

  std::vector<double> file_values;
  if (auto v = get("potential.values_file")) {
    std::filesystem::path path(*v);
    if (path.is_relative()) path = std::filesystem::path(base_dir) / path;
    std::ifstream in(path);
    if (!in) throw ConfigError("potential.values_file: cannot open '" + path.string() + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    file_values = to_list("potential.values_file", ss.str());
  }
  const std::string type = get("potential.type").value_or("constant");
  auto values_for = [&](const char* key) {
    const auto v = get(key);
    if (v && !file_values.empty())
      throw ConfigError(std::string(key) + ": give either the list or potential.values_file, not both");
    if (v) return to_list(key, *v);
    if (!file_values.empty()) return file_values;
    throw ConfigError(std::string(key) + ": required for potential.type = " + type);
  };
  try {
    if (type == "constant") {
      if (get("potential.f_values") || get("potential.table") || !file_values.empty())
        throw ConfigError("potential.type: constant takes only potential.u0");
      const auto v = get("potential.u0");
      if (!v) throw ConfigError("potential.u0: required for potential.type = constant");
      c.potential = ConstantPotential{to_double("potential.u0", *v)};
    } else if (type == "separable") {
      if (get("potential.u0") || get("potential.table"))
        throw ConfigError("potential.type: separable takes only potential.f_values");
      std::vector<double> f = values_for("potential.f_values");
      c.potential = SeparablePotential{uniform_nodes(p, f.size()), std::move(f)};
    } else if (type == "tabulated") {
      if (get("potential.u0") || get("potential.f_values"))
        throw ConfigError("potential.type: tabulated takes only potential.table");
      std::vector<double> t = values_for("potential.table");
      std::size_t n = 0;
      while (n * n < t.size()) ++n;
      if (n * n != t.size()) throw ConfigError("potential.table: value count must be a perfect square");
      c.potential = TabulatedPotential{uniform_nodes(p, n), std::move(t)};
    } else {
      throw ConfigError("potential.type: expected constant, separable or tabulated, got '" + type + "'");
    }
    Kernel check(c.potential, p);
  } catch (const ConfigError& e) {
    const std::string msg = e.what();
    if (msg.rfind("potential.", 0) == 0) throw;
    throw ConfigError("potential: " + msg);
  }

  if (auto v = get("dos.type")) {
    try {
      c.dos = parse_dos_kind(*v);
    } catch (const std::exception&) {
      throw ConfigError("dos.type: expected flat_shell or sqrt_band, got '" + *v + "'");
    }
  }
  if (auto v = get("grid.energy_nodes")) c.grid.energy_nodes = to_count("grid.energy_nodes", *v);
  if (c.grid.energy_nodes < 16) throw ConfigError("grid.energy_nodes: must be at least 16");
  if (auto v = get("grid.t_min")) c.grid.t_min = to_double("grid.t_min", *v);
  if (auto v = get("grid.t_max")) c.grid.t_max = to_double("grid.t_max", *v);
  if (auto v = get("grid.t_points")) c.grid.t_points = to_count("grid.t_points", *v);
  if (c.grid.t_points < 8) throw ConfigError("grid.t_points: must be at least 8");
  if (c.grid.t_min < 0.0) throw ConfigError("grid.t_min: must be nonnegative");
  if (get("grid.t_max") && !(c.grid.t_max > c.grid.t_min))
    throw ConfigError("grid.t_max: must exceed grid.t_min");

  auto positive = [&](const char* key, double& slot) {
    if (auto v = get(key)) {
      slot = to_double(key, *v);
      if (!(slot > 0.0)) throw ConfigError(std::string(key) + ": must be positive");
    }
  };
  positive("solver.tol", c.solver.tol);
  positive("solver.zero_threshold", c.solver.zero_threshold);
  positive("solver.t_tol", c.solver.t_tol);
  positive("quad.tol", c.quad_tol);
  if (auto v = get("solver.max_iter")) c.solver.max_iter = to_count("solver.max_iter", *v);
  if (c.solver.max_iter == 0) throw ConfigError("solver.max_iter: must be positive");
  c.solver.energy_nodes = c.grid.energy_nodes;

  if (auto v = get("output.dir")) c.output.dir = *v;
  if (auto v = get("output.format")) c.output.format = *v;
  if (c.output.format != "csv") throw ConfigError("output.format: only csv is supported");
  refresh_echo(c);
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  const auto parent = std::filesystem::path(path).parent_path();
  return parse_config(ss.str(), parent.empty() ? "." : parent.string());
}

}  // namespace bcs
