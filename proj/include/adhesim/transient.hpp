// SPDX-License-Identifier: Apache-2.0
#pragma once

// Scenario description, full trajectories and the regularization sweep.

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "adhesim/assembly.hpp"
#include "adhesim/diagnostics.hpp"
#include "adhesim/mesh.hpp"
#include "adhesim/model.hpp"
#include "adhesim/monotone.hpp"
#include "adhesim/solver.hpp"

namespace adhesim {

/// Everything needed to run one simulation except the output location.
struct Scenario {
  std::string name = "ln-ln-default";
  EntropyPair pair = EntropyPair::ln_ln;
  int nx = 16, ny = 8;
  double Lx = 2.0, Ly = 1.0;
  MaterialModel::Coefficients coefficients{};
  Loads loads{};
  FieldExpr theta0 = FieldExpr::uniform(0.5);
  FieldExpr theta_s0 = FieldExpr::uniform(0.5);
  FieldExpr chi0 = FieldExpr::uniform(1.0);
  SolverConfig solver{};
};

/// Mesh, validated model and assembled forms of a scenario.
struct Problem {
  Scenario scenario;
  MaterialModel model;
  AssembledForms forms;

  static Problem build(const Scenario& sc) {
    MaterialModel model = MaterialModel::from_coefficients(sc.pair, sc.coefficients);
    validate(model);
    sc.solver.validate();
    Mesh mesh = build_mesh(sc.nx, sc.ny, sc.Lx, sc.Ly);
    AssembledForms forms = assemble(mesh, model);
    return {sc, std::move(model), std::move(forms)};
  }
};

/// Regularized initial data and auxiliary fields at t = 0.
inline State initial_state(const Problem& p, const StepContext& ctx) {
  const auto& mesh = p.forms.mesh;
  const double eps = ctx.cfg().eps;
  State s;
  s.time = 0.0;
  const Eigen::VectorXd th = interpolate(mesh, p.scenario.theta0);
  const auto thv = approx_bulk_init(std::span<const double>(th.data(), th.size()),
                                    p.model.bulk_entropy, eps);
  s.theta = Eigen::Map<const Eigen::VectorXd>(thv.data(), thv.size());
  const Eigen::VectorXd ts = interpolate_surface(mesh, p.scenario.theta_s0);
  const auto tsv = approx_surf_init(std::span<const double>(ts.data(), ts.size()),
                                    p.model.surface_entropy, ctx.cfg().alpha, eps);
  s.theta_s = Eigen::Map<const Eigen::VectorXd>(tsv.data(), tsv.size());
  s.chi = interpolate_surface(mesh, p.scenario.chi0);
  s.u = Eigen::VectorXd::Zero(2 * mesh.num_nodes());
  initialize_aux(s, ctx);
  return s;
}

struct Trajectory {
  std::vector<State> states;
  std::vector<EnergyLedger> ledger;
  std::vector<int> picard_iterations;
  double tau = 0.0;
  double eps = 0.0;
};

/// Time loop from t = 0 to t_end. Step failures are rethrown with the
/// failing time in the message.
inline Trajectory run_transient(const Problem& p, const SolverConfig& cfg) {
  const StepContext ctx(p.forms, p.model, cfg);
  const int steps = cfg.num_steps();
  Trajectory tr;
  tr.tau = cfg.tau;
  tr.eps = cfg.eps;
  tr.states.reserve(steps + 1);
  tr.states.push_back(initial_state(p, ctx));
  for (int n = 0; n < steps; ++n) {
    const State& prev = tr.states.back();
    const double t = (n + 1) * cfg.tau;
    const StepLoads loads = sample_loads(p.forms, p.scenario.loads, t);
    StepInfo info;
    State next;
    try {
      next = step(prev, loads, ctx, &info);
    } catch (const SolverError& e) {
      throw SolverError("step " + std::to_string(n + 1) + " (t=" + std::to_string(t) +
                        "): " + e.what());
    }
    next.time = t;
    tr.ledger.push_back(ledger(prev, next, loads, ctx));
    tr.picard_iterations.push_back(info.picard_iterations);
    tr.states.push_back(std::move(next));
  }
  return tr;
}

inline Trajectory run_transient(const Scenario& sc) {
  const Problem p = Problem::build(sc);
  return run_transient(p, sc.solver);
}

/// Differences between the runs at two consecutive regularization levels.
struct CauchyPair {
  double eps_coarse = 0.0, eps_fine = 0.0;
  double theta = 0.0;    ///< L2(0,T; L2(Omega))
  double theta_s = 0.0;  ///< L2(0,T; L2(Gamma_C))
  double u = 0.0;        ///< H1(0,T; W) with the elastic energy norm on W
  double chi = 0.0;      ///< sup over t of L2(Gamma_C)
};

struct SweepEntry {
  double eps = 0.0;
  bool ok = false;
  std::string error;
  ConstraintReport constraints;
  double bv = 0.0;
  int max_picard = 0;
  double max_residual_ratio = 0.0;
};

struct SweepReport {
  std::vector<SweepEntry> runs;
  std::vector<CauchyPair> pairs;
  bool partial = false;
};

inline CauchyPair cauchy_difference(const Trajectory& a, const Trajectory& b,
                                    const AssembledForms& forms) {
  if (a.states.size() != b.states.size() || a.tau != b.tau)
    throw SolverError("sweep runs have different time grids");
  CauchyPair c{a.eps, b.eps};
  const double tau = a.tau;
  Eigen::VectorXd prev_du;
  for (std::size_t n = 0; n < a.states.size(); ++n) {
    const State& x = a.states[n];
    const State& y = b.states[n];
    const Eigen::VectorXd dchi = x.chi - y.chi;
    c.chi = std::max(c.chi, std::sqrt(dchi.dot(forms.mass_surface * dchi)));
    const Eigen::VectorXd du = x.u - y.u;
    if (n == 0) {
      prev_du = du;
      continue;
    }
    const Eigen::VectorXd dt = x.theta - y.theta;
    const Eigen::VectorXd ds = x.theta_s - y.theta_s;
    c.theta += tau * dt.dot(forms.mass_bulk * dt);
    c.theta_s += tau * ds.dot(forms.mass_surface * ds);
    const Eigen::VectorXd rate = (du - prev_du) / tau;
    c.u += tau * (du.dot(forms.elasticity_a * du) + rate.dot(forms.elasticity_a * rate));
    prev_du = du;
  }
  c.theta = std::sqrt(c.theta);
  c.theta_s = std::sqrt(c.theta_s);
  c.u = std::sqrt(c.u);
  return c;
}

inline double max_residual_ratio(const Trajectory& t) {
  double r = 0.0;
  for (const auto& e : t.ledger)
    r = std::max(r, std::abs(e.residual) / (e.dissipation() + 1e-12));
  return r;
}

/// Runs every eps in `eps_list` (strictly decreasing) and compares
/// neighbours. A failed run marks the report partial; pairs involving it are
/// skipped. `keep` receives the trajectories when non-null.
inline SweepReport epsilon_sweep(const Problem& p, const std::vector<double>& eps_list,
                                 std::vector<std::optional<Trajectory>>* keep = nullptr) {
  if (eps_list.empty()) throw ConfigError("sweep list is empty");
  for (std::size_t i = 0; i < eps_list.size(); ++i) {
    if (!(eps_list[i] > 0.0)) throw ConfigError("sweep values must be positive");
    if (i > 0 && !(eps_list[i] < eps_list[i - 1]))
      throw ConfigError("sweep list must be strictly decreasing");
  }
  SweepReport rep;
  std::vector<std::optional<Trajectory>> runs;
  for (double eps : eps_list) {
    SolverConfig cfg = p.scenario.solver;
    cfg.eps = eps;
    SweepEntry e;
    e.eps = eps;
    try {
      Trajectory t = run_transient(p, cfg);
      e.ok = true;
      e.constraints = constraint_report(t.states, cfg.tau, p.model);
      e.bv = bv_monitor(t.states, p.forms);
      for (int it : t.picard_iterations) e.max_picard = std::max(e.max_picard, it);
      e.max_residual_ratio = max_residual_ratio(t);
      runs.emplace_back(std::move(t));
    } catch (const Error& ex) {
      e.error = ex.what();
      rep.partial = true;
      runs.emplace_back(std::nullopt);
    }
    rep.runs.push_back(e);
  }
  for (std::size_t i = 1; i < runs.size(); ++i)
    if (runs[i - 1] && runs[i]) rep.pairs.push_back(cauchy_difference(*runs[i - 1], *runs[i], p.forms));
  if (keep) *keep = std::move(runs);
  return rep;
}

}  // namespace adhesim
