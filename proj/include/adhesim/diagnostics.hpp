// SPDX-License-Identifier: Apache-2.0
#pragma once

// Per-step energy bookkeeping, constraint monitors and the BV surrogate.

#include <array>
#include <cmath>
#include <limits>
#include <string_view>
#include <vector>

#include "adhesim/solver.hpp"

namespace adhesim {

/// Every term of the discrete energy balance of one step. Stored energies
/// are evaluated at the new time level; dissipations and work are step
/// increments (rate times tau).
struct EnergyLedger {
  double stored_bulk = 0.0;
  double thermal_bulk = 0.0;
  double stored_surface = 0.0;
  double thermal_surface = 0.0;
  double exchange = 0.0;
  double viscous = 0.0;
  double elastic = 0.0;
  double adhesive = 0.0;
  double contact = 0.0;
  double friction = 0.0;
  double friction_gap = 0.0;
  double rate = 0.0;
  double irreversibility = 0.0;
  double gradient = 0.0;
  double constraint = 0.0;
  double potential = 0.0;
  double work_heat = 0.0;
  double work_force = 0.0;
  double residual = 0.0;

  static constexpr std::array<std::string_view, 19> kColumns{
      "stored_bulk", "thermal_bulk", "stored_surface", "thermal_surface", "exchange",
      "viscous",     "elastic",      "adhesive",       "contact",         "friction",
      "friction_gap", "rate",        "irreversibility", "gradient",       "constraint",
      "potential",   "work_heat",    "work_force",     "residual"};

  std::array<double, 19> values() const {
    return {stored_bulk, thermal_bulk, stored_surface, thermal_surface, exchange,
            viscous,     elastic,      adhesive,       contact,         friction,
            friction_gap, rate,        irreversibility, gradient,       constraint,
            potential,   work_heat,    work_force,     residual};
  }

  /// Names of the dissipation columns, in column order.
  static constexpr std::array<std::string_view, 8> kDissipation{
      "thermal_bulk", "thermal_surface", "exchange", "viscous",
      "friction",     "friction_gap",    "rate",     "irreversibility"};

  std::array<double, 8> dissipation_values() const {
    return {thermal_bulk, thermal_surface, exchange, viscous,
            friction,     friction_gap,    rate,     irreversibility};
  }
  double dissipation() const {
    double s = 0.0;
    for (double d : dissipation_values()) s += d;
    return s;
  }
  double stored() const {
    return stored_bulk + stored_surface + elastic + adhesive + contact + gradient + constraint +
           potential;
  }
  double work() const { return work_heat + work_force; }
};

/// The stored-energy columns of one state (everything else zero).
inline EnergyLedger stored_energy(const State& s, const StepContext& ctx) {
  const auto& forms = ctx.forms();
  const auto& model = ctx.model();
  EnergyLedger e;
  const auto& mb = forms.lumped_bulk;
  for (int i = 0; i < forms.num_bulk(); ++i)
    e.stored_bulk += mb[i] * ctx.bulk_entropy().big_i_closed_form(s.theta[i]);
  const auto& ms = forms.lumped_surface;
  for (int k = 0; k < forms.num_surface(); ++k) {
    const Vec2 uk = ctx.surface_displacement(s.u, k);
    const double c = s.chi[k];
    e.stored_surface += ms[k] * ctx.surface_entropy().big_i_closed_form(s.theta_s[k]);
    e.adhesive += ms[k] * 0.5 * c * dot(uk, uk);
    e.contact += ms[k] * ctx.contact().value(uk);
    e.constraint += ms[k] * ctx.adhesion().beta_hat(c);
    e.potential += ms[k] * (model.gamma(c) - model.theta_eq * model.lambda(c));
  }
  e.elastic = 0.5 * s.u.dot(forms.elasticity_a * s.u);
  e.gradient = 0.5 * s.chi.dot(forms.surface_stiffness * s.chi);
  return e;
}

/// Ledger of the step prev -> next, with loads sampled at next.time.
inline EnergyLedger ledger(const State& prev, const State& next, const StepLoads& loads,
                           const StepContext& ctx) {
  const auto& forms = ctx.forms();
  const auto& model = ctx.model();
  const double tau = ctx.cfg().tau;
  EnergyLedger e = stored_energy(next, ctx);
  const EnergyLedger e0 = stored_energy(prev, ctx);

  Eigen::VectorXd gv(forms.num_bulk());
  for (int i = 0; i < forms.num_bulk(); ++i) gv[i] = model.g(next.theta[i]);
  e.thermal_bulk = tau * next.theta.dot(forms.stiffness * gv);

  const int ns = forms.num_surface();
  Eigen::VectorXd fv(ns);
  for (int k = 0; k < ns; ++k) fv[k] = ctx.surface_entropy().flux(next.theta_s[k]);
  e.thermal_surface = tau * next.theta_s.dot(forms.surface_stiffness * fv);

  const Eigen::VectorXd du = next.u - prev.u;
  e.viscous = du.dot(forms.viscosity_b * du) / tau;

  const Eigen::VectorXd theta_tr = ctx.trace(next.theta);
  const Eigen::VectorXd r = ctx.smoothed_pressure(next.u);
  const auto& ms = forms.lumped_surface;
  for (int k = 0; k < ns; ++k) {
    const int b = ctx.bulk_node_of_surface(k);
    const Vec2 vk = {du[2 * b] / tau, du[2 * b + 1] / tau};
    const double gap = theta_tr[k] - next.theta_s[k];
    const double rate = (next.chi[k] - prev.chi[k]) / tau;
    e.exchange += tau * ms[k] * model.k(next.chi[k]) * gap * gap;
    e.friction += tau * ms[k] * model.friction_coef(gap) * r[k] *
                  dot(ctx.friction().gradient(vk), vk);
    e.friction_gap += tau * ms[k] * model.friction_coef_prime(gap) * r[k] *
                      ctx.friction().value(vk) * gap;
    e.rate += tau * ms[k] * rate * rate;
    e.irreversibility += tau * ms[k] * ctx.adhesion().rho(rate) * rate;
  }
  e.work_heat = tau * loads.heat.dot(next.theta);
  e.work_force = loads.momentum.dot(du);
  e.residual = e.stored() - e0.stored() + e.dissipation() - e.work();
  return e;
}

/// Constraint maxima over a trajectory.
struct ConstraintReport {
  double below_zero = 0.0;     ///< max(-chi, 0)
  double above_one = 0.0;      ///< max(chi - 1, 0)
  double rate_positive = 0.0;  ///< max((chi^{n+1} - chi^n)/tau, 0)
  bool positivity_applicable = false;
  double theta_negative = 0.0;    ///< max(-theta, 0), ln bulk only
  double theta_s_negative = 0.0;  ///< max(-theta_s, 0), ln surface only
  double theta_min = std::numeric_limits<double>::infinity();
  double theta_s_min = std::numeric_limits<double>::infinity();
};

inline ConstraintReport constraint_report(const std::vector<State>& traj, double tau,
                                          const MaterialModel& model) {
  ConstraintReport r;
  const bool ln_bulk = model.bulk_entropy.kind() == MonotoneKind::logarithm;
  const bool ln_surf = model.surface_entropy.kind() == MonotoneKind::logarithm;
  r.positivity_applicable = ln_bulk || ln_surf;
  for (std::size_t n = 0; n < traj.size(); ++n) {
    const State& s = traj[n];
    r.below_zero = std::max(r.below_zero, (-s.chi.array()).max(0.0).maxCoeff());
    r.above_one = std::max(r.above_one, (s.chi.array() - 1.0).max(0.0).maxCoeff());
    if (n > 0)
      r.rate_positive = std::max(
          r.rate_positive, ((s.chi - traj[n - 1].chi).array() / tau).max(0.0).maxCoeff());
    r.theta_min = std::min(r.theta_min, s.theta.minCoeff());
    r.theta_s_min = std::min(r.theta_s_min, s.theta_s.minCoeff());
  }
  if (ln_bulk) r.theta_negative = std::max(-r.theta_min, 0.0);
  if (ln_surf) r.theta_s_negative = std::max(-r.theta_s_min, 0.0);
  return r;
}

/// Sum over steps of the discrete dual norm of M (theta^{n+1} - theta^n).
inline double bv_monitor(const std::vector<State>& traj, const AssembledForms& forms) {
  double s = 0.0;
  for (std::size_t n = 1; n < traj.size(); ++n)
    s += dual_norm_surrogate(forms, forms.mass_bulk * (traj[n].theta - traj[n - 1].theta));
  return s;
}

}  // namespace adhesim
