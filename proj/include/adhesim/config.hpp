// SPDX-License-Identifier: Apache-2.0
#pragma once

// Flat INI configuration: "[section]" headers and "key = value" lines, "#" or
// ";" comments. Every key is "section.key"; unknown keys are rejected.

#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "adhesim/errors.hpp"
#include "adhesim/transient.hpp"

namespace adhesim {

struct RunConfig {
  Scenario scenario;
  std::string output_dir = "out";
  int output_every = 10;
  std::vector<double> sweep_eps;
};

namespace detail {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline double parse_double(const std::string& v, int line, const std::string& key) {
  double x = 0.0;
  const char* end = v.data() + v.size();
  const auto [p, ec] = std::from_chars(v.data(), end, x);
  if (ec != std::errc() || p != end || !std::isfinite(x))
    throw ConfigError("line " + std::to_string(line) + ": key '" + key +
                      "' expects a number, got '" + v + "'");
  return x;
}

inline int parse_int(const std::string& v, int line, const std::string& key) {
  int x = 0;
  const char* end = v.data() + v.size();
  const auto [p, ec] = std::from_chars(v.data(), end, x);
  if (ec != std::errc() || p != end)
    throw ConfigError("line " + std::to_string(line) + ": key '" + key +
                      "' expects an integer, got '" + v + "'");
  return x;
}

inline TimeProfile parse_profile(const std::string& v, int line, const std::string& key) {
  if (v == "constant") return TimeProfile::constant;
  if (v == "ramp") return TimeProfile::ramp;
  if (v == "bump") return TimeProfile::bump;
  throw ConfigError("line " + std::to_string(line) + ": key '" + key +
                    "' expects constant, ramp or bump, got '" + v + "'");
}

inline EntropyPair parse_pair(const std::string& v, int line) {
  if (v == "ln-ln") return EntropyPair::ln_ln;
  if (v == "id-id") return EntropyPair::id_id;
  if (v == "ln-id") return EntropyPair::ln_id;
  throw ConfigError("line " + std::to_string(line) +
                    ": key 'scenario.pair' expects ln-ln, id-id or ln-id, got '" + v + "'");
}

using Setter = std::function<void(const std::string& value, int line, const std::string& key)>;

inline Setter number(double& d) {
  return [&d](const std::string& v, int l, const std::string& k) { d = parse_double(v, l, k); };
}
inline Setter integer(int& i) {
  return [&i](const std::string& v, int l, const std::string& k) { i = parse_int(v, l, k); };
}

inline void field_keys(std::map<std::string, Setter>& t, const std::string& prefix, FieldExpr& e) {
  t[prefix + ".constant"] = number(e.constant);
  t[prefix + ".ramp_x"] = number(e.ramp_x);
  t[prefix + ".ramp_y"] = number(e.ramp_y);
  t[prefix + ".gauss_amp"] = number(e.gauss_amp);
  t[prefix + ".gauss_x"] = number(e.gauss_x);
  t[prefix + ".gauss_y"] = number(e.gauss_y);
  t[prefix + ".gauss_width"] = number(e.gauss_width);
}

inline void time_keys(std::map<std::string, Setter>& t, const std::string& prefix, TimeLaw& law) {
  t[prefix + ".time"] = [&law](const std::string& v, int l, const std::string& k) {
    law.kind = parse_profile(v, l, k);
  };
  t[prefix + ".period"] = number(law.period);
}

}  // namespace detail

/// Keys that must appear in every configuration, in reporting order.
inline const std::vector<std::string>& required_keys() {
  static const std::vector<std::string> keys{"scenario.name", "scenario.pair", "mesh.nx",
                                             "mesh.ny",       "solver.tau",    "solver.t_end",
                                             "solver.eps",    "output.directory"};
  return keys;
}

/// Parses configuration text. `origin` prefixes error messages.
inline RunConfig parse_config_text(const std::string& text, const std::string& origin = "config") {
  RunConfig rc;
  Scenario& sc = rc.scenario;
  SolverConfig& so = sc.solver;
  auto& co = sc.coefficients;
  std::map<std::string, detail::Setter> t;
  using detail::integer;
  using detail::number;

  t["scenario.name"] = [&](const std::string& v, int, const std::string&) { sc.name = v; };
  t["scenario.pair"] = [&](const std::string& v, int l, const std::string&) {
    sc.pair = detail::parse_pair(v, l);
  };
  t["mesh.nx"] = integer(sc.nx);
  t["mesh.ny"] = integer(sc.ny);
  t["mesh.Lx"] = number(sc.Lx);
  t["mesh.Ly"] = number(sc.Ly);

  t["material.g1"] = number(co.g1);
  t["material.k0"] = number(co.k0);
  t["material.c_base"] = number(co.c_base);
  t["material.c_slope"] = number(co.c_slope);
  t["material.lambda1"] = number(co.lambda1);
  t["material.gamma1"] = number(co.gamma1);
  t["material.theta_eq"] = number(co.theta_eq);
  t["material.ke_lambda"] = number(co.ke_lambda);
  t["material.ke_mu"] = number(co.ke_mu);
  t["material.kv_lambda"] = number(co.kv_lambda);
  t["material.kv_mu"] = number(co.kv_mu);

  detail::field_keys(t, "loads.heat", sc.loads.heat);
  detail::time_keys(t, "loads.heat", sc.loads.heat_time);
  t["loads.body.fx"] = number(sc.loads.body_force[0]);
  t["loads.body.fy"] = number(sc.loads.body_force[1]);
  detail::field_keys(t, "loads.body.profile", sc.loads.body_profile);
  detail::time_keys(t, "loads.body", sc.loads.body_time);
  t["loads.traction.x"] = number(sc.loads.traction[0]);
  t["loads.traction.y"] = number(sc.loads.traction[1]);
  detail::time_keys(t, "loads.traction", sc.loads.traction_time);

  detail::field_keys(t, "initial.theta", sc.theta0);
  detail::field_keys(t, "initial.theta_s", sc.theta_s0);
  detail::field_keys(t, "initial.chi", sc.chi0);

  t["solver.tau"] = number(so.tau);
  t["solver.t_end"] = number(so.t_end);
  t["solver.eps"] = number(so.eps);
  t["solver.delta_psi"] = number(so.delta_psi);
  t["solver.tol_picard"] = number(so.tol_picard);
  t["solver.max_picard"] = integer(so.max_picard);
  t["solver.tol_newton"] = number(so.tol_newton);
  t["solver.max_newton"] = integer(so.max_newton);
  t["solver.sigma_R"] = number(so.sigma_R);
  t["solver.alpha"] = number(so.alpha);
  t["solver.picard_relaxation"] = number(so.picard_relaxation);

  t["output.directory"] = [&](const std::string& v, int, const std::string&) {
    rc.output_dir = v;
  };
  t["output.every"] = integer(rc.output_every);
  t["sweep.eps"] = [&](const std::string& v, int l, const std::string& k) {
    rc.sweep_eps.clear();
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ','))
      rc.sweep_eps.push_back(detail::parse_double(detail::trim(item), l, k));
  };

  std::set<std::string> seen;
  std::istringstream in(text);
  std::string raw, section;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    std::string s = detail::trim(raw);
    if (s.empty() || s[0] == '#' || s[0] == ';') continue;
    auto where = [&] { return origin + ":" + std::to_string(line) + ": "; };
    if (s.front() == '[') {
      if (s.back() != ']') throw ConfigError(where() + "malformed section header '" + s + "'");
      section = detail::trim(s.substr(1, s.size() - 2));
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw ConfigError(where() + "expected key = value, got '" + s + "'");
    const std::string key = detail::trim(s.substr(0, eq));
    const std::string value = detail::trim(s.substr(eq + 1));
    const std::string full = section.empty() ? key : section + "." + key;
    const auto it = t.find(full);
    if (it == t.end()) throw ConfigError(where() + "unknown key '" + full + "'");
    if (!seen.insert(full).second) throw ConfigError(where() + "duplicate key '" + full + "'");
    if (value.empty()) throw ConfigError(where() + "empty value for key '" + full + "'");
    try {
      it->second(value, line, full);
    } catch (const ConfigError& e) {
      // Re-anchor the message at the file origin.
      std::string msg = e.what();
      const std::string prefix = "line " + std::to_string(line) + ": ";
      if (msg.rfind(prefix, 0) == 0) msg = msg.substr(prefix.size());
      throw ConfigError(where() + msg);
    }
  }
  for (const auto& k : required_keys())
    if (!seen.count(k)) throw ConfigError(origin + ": missing required key '" + k + "'");
  if (rc.output_every < 1) throw ConfigError(origin + ": output.every must be positive");
  so.validate();
  so.num_steps();
  return rc;
}

inline RunConfig parse_config(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot open config file '" + path.string() + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config_text(ss.str(), path.string());
}

/// Output location, honouring the ADHESIM_OUTPUT_ROOT override.
inline std::filesystem::path resolve_output_dir(const RunConfig& rc) {
  const char* root = std::getenv("ADHESIM_OUTPUT_ROOT");
  if (root && *root) return std::filesystem::path(root) / rc.output_dir;
  return rc.output_dir;
}

}  // namespace adhesim
