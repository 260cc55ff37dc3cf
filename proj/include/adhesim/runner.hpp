// SPDX-License-Identifier: Apache-2.0
#pragma once

// CSV export and the run / sweep drivers behind the command line tool.

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "adhesim/config.hpp"
#include "adhesim/diagnostics.hpp"
#include "adhesim/transient.hpp"

namespace adhesim {

inline constexpr int kCsvVersion = 1;

/// 17 significant digits, locale independent.
inline std::string num(double x) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
  return std::string(buf, r.ptr);
}

/// Shortest round-trip form, for names and log lines.
inline std::string short_num(double x) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

namespace detail {

inline std::ofstream open_csv(const std::filesystem::path& p, const std::string& kind) {
  std::ofstream f(p, std::ios::binary);
  if (!f) throw ConfigError("cannot write output file '" + p.string() + "'");
  f << "# adhesim " << kind << " v" << kCsvVersion << '\n';
  return f;
}

}  // namespace detail

inline void write_ledger_csv(std::ostream& os, const Trajectory& t) {
  os << "step,time";
  for (auto c : EnergyLedger::kColumns) os << ',' << c;
  os << '\n';
  for (std::size_t n = 0; n < t.ledger.size(); ++n) {
    os << n + 1 << ',' << num(t.states[n + 1].time);
    for (double v : t.ledger[n].values()) os << ',' << num(v);
    os << '\n';
  }
}

/// Bulk rows (id, x, y, theta) followed by contact rows (id, x, theta_s,
/// chi, u_N, |u_T|).
inline void write_fields_csv(std::ostream& os, const State& s, const Mesh& mesh) {
  os << "# time=" << num(s.time) << '\n';
  os << "# bulk: id,x,y,theta\n";
  for (int i = 0; i < mesh.num_nodes(); ++i)
    os << "bulk," << i << ',' << num(mesh.nodes[i][0]) << ',' << num(mesh.nodes[i][1]) << ','
       << num(s.theta[i]) << '\n';
  os << "# surface: id,x,theta_s,chi,u_N,abs_u_T\n";
  for (int k = 0; k < mesh.surface.num_nodes(); ++k) {
    const auto u = s.displacement(mesh.surface.bulk_node[k]);
    os << "surface," << k << ',' << num(mesh.surface.x[k]) << ',' << num(s.theta_s[k]) << ','
       << num(s.chi[k]) << ',' << num(normal_component(u)) << ','
       << num(std::abs(tangential_component(u))) << '\n';
  }
}

inline void write_constraints_header(std::ostream& os) {
  os << "eps,below_zero,above_one,rate_positive,positivity_applicable,theta_negative,"
        "theta_s_negative,theta_min,theta_s_min,bv,max_picard,max_residual_ratio\n";
}

inline void write_constraints_row(std::ostream& os, const SweepEntry& e) {
  const auto& c = e.constraints;
  os << num(e.eps) << ',' << num(c.below_zero) << ',' << num(c.above_one) << ','
     << num(c.rate_positive) << ',' << (c.positivity_applicable ? 1 : 0) << ','
     << (c.positivity_applicable ? num(c.theta_negative) : "na") << ','
     << (c.positivity_applicable ? num(c.theta_s_negative) : "na") << ',' << num(c.theta_min)
     << ',' << num(c.theta_s_min) << ',' << num(e.bv) << ',' << e.max_picard << ','
     << num(e.max_residual_ratio) << '\n';
}

inline void write_sweep_csv(std::ostream& os, const SweepReport& r) {
  os << "eps_coarse,eps_fine,theta,theta_s,u,chi\n";
  for (const auto& p : r.pairs)
    os << num(p.eps_coarse) << ',' << num(p.eps_fine) << ',' << num(p.theta) << ','
       << num(p.theta_s) << ',' << num(p.u) << ',' << num(p.chi) << '\n';
}

inline std::string snapshot_name(int step) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "fields_t%06d.csv", step);
  return buf;
}

inline SweepEntry summarize(const Trajectory& t, const Problem& p) {
  SweepEntry e;
  e.eps = t.eps;
  e.ok = true;
  e.constraints = constraint_report(t.states, t.tau, p.model);
  e.bv = bv_monitor(t.states, p.forms);
  for (int it : t.picard_iterations) e.max_picard = std::max(e.max_picard, it);
  e.max_residual_ratio = max_residual_ratio(t);
  return e;
}

/// Writes ledger, snapshots and the single-row constraint table of one run.
inline void write_run(const std::filesystem::path& dir, const Trajectory& t, const Problem& p,
                      int every) {
  std::filesystem::create_directories(dir);
  {
    auto f = detail::open_csv(dir / "ledger.csv", "ledger");
    write_ledger_csv(f, t);
  }
  const int last = static_cast<int>(t.states.size()) - 1;
  for (int n = 0; n <= last; ++n) {
    if (n % every != 0 && n != last) continue;
    auto f = detail::open_csv(dir / snapshot_name(n), "fields");
    write_fields_csv(f, t.states[n], p.forms.mesh);
  }
  auto f = detail::open_csv(dir / "constraints.csv", "constraints");
  write_constraints_header(f);
  write_constraints_row(f, summarize(t, p));
}

inline std::string run_summary(const Scenario& sc, const SweepEntry& e, std::size_t steps) {
  std::ostringstream os;
  os << sc.name << " eps=" << short_num(e.eps) << ": " << steps << " steps, max picard "
     << e.max_picard << ", max |residual|/dissipation " << std::setprecision(3)
     << e.max_residual_ratio << ", min theta " << e.constraints.theta_min << ", min theta_s "
     << e.constraints.theta_s_min;
  return os.str();
}

/// Directory name of one sweep level.
inline std::string eps_dir_name(double eps) { return "eps_" + short_num(eps); }

inline void run_single(const RunConfig& rc, std::ostream& log) {
  const Problem p = Problem::build(rc.scenario);
  const Trajectory t = run_transient(p, rc.scenario.solver);
  const auto dir = resolve_output_dir(rc);
  write_run(dir, t, p, rc.output_every);
  log << run_summary(rc.scenario, summarize(t, p), t.ledger.size()) << " -> " << dir.string()
      << '\n';
}

/// Runs the sweep and writes one directory per level plus sweep.csv and a
/// combined constraints.csv. Returns false when some level failed.
inline bool run_sweep(const RunConfig& rc, std::ostream& log) {
  if (rc.sweep_eps.empty()) throw ConfigError("sweep requires the key 'sweep.eps'");
  const Problem p = Problem::build(rc.scenario);
  std::vector<std::optional<Trajectory>> runs;
  const SweepReport rep = epsilon_sweep(p, rc.sweep_eps, &runs);
  const auto dir = resolve_output_dir(rc);
  std::filesystem::create_directories(dir);
  for (std::size_t i = 0; i < runs.size(); ++i) {
    if (runs[i]) {
      write_run(dir / eps_dir_name(rep.runs[i].eps), *runs[i], p, rc.output_every);
      log << run_summary(rc.scenario, rep.runs[i], runs[i]->ledger.size()) << '\n';
    } else {
      log << rc.scenario.name << " eps=" << short_num(rep.runs[i].eps)
          << ": FAILED: " << rep.runs[i].error << '\n';
    }
  }
  {
    auto f = detail::open_csv(dir / "sweep.csv", "sweep");
    if (rep.partial) f << "# partial: at least one level failed\n";
    write_sweep_csv(f, rep);
  }
  auto f = detail::open_csv(dir / "constraints.csv", "constraints");
  write_constraints_header(f);
  for (const auto& e : rep.runs)
    if (e.ok) write_constraints_row(f, e);
  log << "sweep " << rc.scenario.name << ": " << rep.pairs.size() << " Cauchy pairs -> "
      << dir.string() << '\n';
  return !rep.partial;
}

}  // namespace adhesim
