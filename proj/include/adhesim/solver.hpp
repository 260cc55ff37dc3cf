// SPDX-License-Identifier: Apache-2.0
#pragma once

// Backward Euler in time with an outer fixed-point loop over three stages:
// momentum, adhesion, then the two (decoupled) temperature equations.

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>
#include <cmath>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "adhesim/assembly.hpp"
#include "adhesim/constraints.hpp"
#include "adhesim/errors.hpp"
#include "adhesim/model.hpp"
#include "adhesim/monotone.hpp"

namespace adhesim {

struct SolverConfig {
  double tau = 0.01;
  double t_end = 1.0;
  double eps = 0.1;
  double delta_psi = 1e-6;
  double tol_picard = 1e-10;
  int max_picard = 50;
  double tol_newton = 1e-11;
  int max_newton = 100;
  double sigma_R = 0.0;  ///< <= 0 selects 3 h
  double alpha = 0.5;
  double picard_relaxation = 1.0;
  /// Fields with sup norm below this are compared in absolute terms.
  double picard_floor = 1e-3;

  void validate() const {
    auto require = [](bool ok, const std::string& msg) {
      if (!ok) throw ConfigError(msg);
    };
    require(tau > 0.0 && std::isfinite(tau), "tau must be positive");
    require(t_end >= 0.0 && std::isfinite(t_end), "t_end must be nonnegative");
    require(eps > 0.0, "eps must be positive");
    require(delta_psi >= 0.0, "delta_psi must be nonnegative");
    require(tol_picard > 0.0 && tol_picard < 1.0, "tol_picard must lie in (0,1)");
    require(max_picard > 0, "max_picard must be positive");
    require(tol_newton > 0.0 && tol_newton < 1.0, "tol_newton must lie in (0,1)");
    require(max_newton > 0, "max_newton must be positive");
    require(alpha > 0.0 && alpha < 1.0, "alpha must lie in (0,1)");
    require(picard_relaxation > 0.0 && picard_relaxation <= 1.0,
            "picard_relaxation must lie in (0,1]");
    require(picard_floor > 0.0, "picard_floor must be positive");
  }

  int num_steps() const {
    const double n = t_end / tau;
    const long r = std::lround(n);
    if (std::abs(n - r) > 1e-9 * std::max(1.0, n))
      throw ConfigError("t_end must be an integer multiple of tau");
    return static_cast<int>(r);
  }
};

/// Per-(forms, model, cfg) cached objects shared by all stages.
class StepContext {
 public:
  StepContext(const AssembledForms& forms, const MaterialModel& model, const SolverConfig& cfg)
      : forms_(&forms),
        model_(&model),
        cfg_(cfg),
        bulk_(RegularizedEntropy::bulk(model.bulk_entropy, cfg.eps)),
        surf_(RegularizedEntropy::surface(model.surface_entropy, cfg.eps)),
        adh_{cfg.eps},
        contact_{cfg.eps},
        friction_{cfg.delta_psi},
        smoother_(NonlocalSmoother{cfg.sigma_R > 0.0 ? cfg.sigma_R
                                                     : 3.0 * forms.mesh.surface.mesh_size(),
                                   model.nu},
                  forms.mesh.surface) {
    cfg_.validate();
    momentum_base_ = forms.viscosity_b / cfg.tau + forms.elasticity_a;
    momentum_base_.makeCompressed();
    mom_solver_ = std::make_shared<Eigen::SimplicialLDLT<SpMat>>();
    mom_solver_->analyzePattern(momentum_base_);
    surface_dof_.resize(forms.num_surface());
    for (int k = 0; k < forms.num_surface(); ++k) surface_dof_[k] = forms.mesh.surface.bulk_node[k];
  }

  const AssembledForms& forms() const { return *forms_; }
  const MaterialModel& model() const { return *model_; }
  const SolverConfig& cfg() const { return cfg_; }
  const RegularizedEntropy& bulk_entropy() const { return bulk_; }
  const RegularizedEntropy& surface_entropy() const { return surf_; }
  const AdhesionConstraints& adhesion() const { return adh_; }
  const ContactPotential& contact() const { return contact_; }
  const FrictionPotential& friction() const { return friction_; }
  const SmootherOperator& smoother() const { return smoother_; }

  int bulk_node_of_surface(int k) const { return surface_dof_[k]; }

  /// Nodal contact pressure DPhi_eps(u) . n on the surface.
  Eigen::VectorXd contact_pressure(const Eigen::VectorXd& u) const {
    const int ns = forms_->num_surface();
    Eigen::VectorXd p(ns);
    for (int k = 0; k < ns; ++k) {
      const int b = surface_dof_[k];
      p[k] = dot(contact_.gradient({u[2 * b], u[2 * b + 1]}), kContactNormal);
    }
    return p;
  }

  /// The contact force as a surface dual vector (one row per node).
  SurfaceVectors contact_dual(const Eigen::VectorXd& u) const {
    const Eigen::VectorXd p = forms_->mass_surface * contact_pressure(u);
    SurfaceVectors eta(p.size(), 2);
    eta.col(0) = p * kContactNormal[0];
    eta.col(1) = p * kContactNormal[1];
    return eta;
  }

  /// |R(eta)| nodewise for eta = DPhi_eps(u).
  Eigen::VectorXd smoothed_pressure(const Eigen::VectorXd& u) const {
    const SurfaceVectors eta = contact_dual(u);
    const Eigen::VectorXd r0 = smoother_.apply(eta.col(0));
    const Eigen::VectorXd r1 = smoother_.apply(eta.col(1));
    return (r0.array().square() + r1.array().square()).sqrt();
  }

  Eigen::VectorXd trace(const Eigen::VectorXd& bulk) const { return forms_->trace_contact * bulk; }

  Vec2 surface_displacement(const Eigen::VectorXd& u, int k) const {
    const int b = surface_dof_[k];
    return {u[2 * b], u[2 * b + 1]};
  }

  const SpMat& momentum_base() const { return momentum_base_; }
  Eigen::SimplicialLDLT<SpMat>& momentum_solver() const { return *mom_solver_; }

 private:
  const AssembledForms* forms_;
  const MaterialModel* model_;
  SolverConfig cfg_;
  RegularizedEntropy bulk_, surf_;
  AdhesionConstraints adh_;
  ContactPotential contact_;
  FrictionPotential friction_;
  SmootherOperator smoother_;
  SpMat momentum_base_;
  std::shared_ptr<Eigen::SimplicialLDLT<SpMat>> mom_solver_;
  std::vector<int> surface_dof_;
};

struct MomentumResult {
  Eigen::VectorXd u;
  SurfaceVectors eta, mu, z;
  int iterations = 0;
};

struct AdhesionResult {
  Eigen::VectorXd chi, xi, zeta;
  int sweeps = 0;
};

namespace detail {

inline std::string history_string(const std::vector<double>& h) {
  std::ostringstream os;
  os.precision(3);
  for (std::size_t i = 0; i < h.size(); ++i) os << (i ? ", " : "") << h[i];
  return os.str();
}

inline double sup_norm(const Eigen::VectorXd& v) { return v.size() ? v.lpNorm<Eigen::Infinity>() : 0.0; }

}  // namespace detail

/// Momentum stage: minimizes the convex incremental energy whose
/// Euler-Lagrange equation is the discrete momentum balance, by Newton with
/// Armijo backtracking. `hat` supplies theta, theta_s, chi and the
/// displacement used in the nonlocal friction bound; `prev` supplies u^n.
inline MomentumResult solve_momentum(const State& hat, const State& prev,
                                     const Eigen::VectorXd& F, const StepContext& ctx) {
  const auto& forms = ctx.forms();
  const auto& model = ctx.model();
  const double tau = ctx.cfg().tau;
  const int ns = forms.num_surface();
  const Eigen::VectorXd& un = prev.u;

  const Eigen::VectorXd thermal = forms.div_coupling.transpose() * hat.theta;
  const Eigen::VectorXd theta_tr = ctx.trace(hat.theta);
  const Eigen::VectorXd r_hat = ctx.smoothed_pressure(hat.u);
  const Eigen::VectorXd& ms = forms.lumped_surface;
  Eigen::VectorXd fric(ns);
  for (int k = 0; k < ns; ++k)
    fric[k] = ms[k] * model.friction_coef(theta_tr[k] - hat.theta_s[k]) * r_hat[k];

  const SpMat& base = ctx.momentum_base();
  auto energy = [&](const Eigen::VectorXd& u) {
    const Eigen::VectorXd du = u - un;
    double e = 0.5 * du.dot(forms.viscosity_b * du) / tau + 0.5 * u.dot(forms.elasticity_a * u) +
               thermal.dot(u) - F.dot(u);
    for (int k = 0; k < ns; ++k) {
      const Vec2 uk = ctx.surface_displacement(u, k);
      const Vec2 vk = {(uk[0] - un[2 * ctx.bulk_node_of_surface(k)]) / tau,
                       (uk[1] - un[2 * ctx.bulk_node_of_surface(k) + 1]) / tau};
      e += ms[k] * (0.5 * hat.chi[k] * dot(uk, uk) + ctx.contact().value(uk)) +
           tau * fric[k] * ctx.friction().value(vk);
    }
    return e;
  };
  auto gradient = [&](const Eigen::VectorXd& u, Eigen::VectorXd* diag) {
    Eigen::VectorXd g = forms.viscosity_b * (u - un) / tau + forms.elasticity_a * u + thermal - F;
    if (diag) diag->setZero(u.size());
    for (int k = 0; k < ns; ++k) {
      const int b = ctx.bulk_node_of_surface(k);
      const Vec2 uk = {u[2 * b], u[2 * b + 1]};
      const Vec2 vk = {(uk[0] - un[2 * b]) / tau, (uk[1] - un[2 * b + 1]) / tau};
      const Vec2 fc = ctx.contact().gradient(uk);
      const double ft = fric[k] * ctx.friction().gradient_t(vk);
      for (int c = 0; c < 2; ++c)
        g[2 * b + c] += ms[k] * (hat.chi[k] * uk[c] + fc[c]) + ft * kContactTangent[c];
      if (diag) {
        const double cn = ms[k] * ctx.contact().curvature(uk);
        const double ct = fric[k] * ctx.friction().curvature(vk) / tau;
        for (int c = 0; c < 2; ++c) {
          (*diag)[2 * b + c] += ms[k] * hat.chi[k] + cn * kContactNormal[c] * kContactNormal[c] +
                                ct * kContactTangent[c] * kContactTangent[c];
        }
      }
    }
    for (int d = 0; d < u.size(); ++d)
      if (forms.clamped_dof[d]) g[d] = u[d];
    return g;
  };

  Eigen::VectorXd u = un;
  for (int d = 0; d < u.size(); ++d)
    if (forms.clamped_dof[d]) u[d] = 0.0;
  std::vector<double> history;
  const double tol = ctx.cfg().tol_newton;
  auto& solver = ctx.momentum_solver();
  MomentumResult res;
  bool converged = false;
  for (int it = 1; it <= ctx.cfg().max_newton; ++it) {
    Eigen::VectorXd diag;
    const Eigen::VectorXd g = gradient(u, &diag);
    history.push_back(detail::sup_norm(g));
    SpMat H = base;
    for (int d = 0; d < u.size(); ++d)
      if (diag[d] != 0.0) H.coeffRef(d, d) += diag[d];
    solver.factorize(H);
    if (solver.info() != Eigen::Success) throw SolverError("momentum Jacobian factorization failed");
    const Eigen::VectorXd step = -solver.solve(g);
    const double e0 = energy(u);
    const double slope = g.dot(step);
    double a = 1.0;
    Eigen::VectorXd trial = u + step;
    const double slack = 1e-13 * (std::abs(e0) + 1.0);
    while (energy(trial) > e0 + 1e-4 * a * slope + slack && a > 1e-10) {
      a *= 0.5;
      trial = u + a * step;
    }
    u = trial;
    res.iterations = it;
    if (a == 1.0 && detail::sup_norm(step) <= tol * (1.0 + detail::sup_norm(u))) {
      converged = true;
      break;
    }
  }
  if (!converged)
    throw SolverError("momentum stage: Newton did not converge in " +
                      std::to_string(ctx.cfg().max_newton) +
                      " iterations; gradient history [" + detail::history_string(history) + "]");

  res.u = u;
  res.eta = ctx.contact_dual(u);
  const Eigen::VectorXd r = ctx.smoothed_pressure(u);
  res.z.resize(ns, 2);
  res.mu.resize(ns, 2);
  for (int k = 0; k < ns; ++k) {
    const int b = ctx.bulk_node_of_surface(k);
    const Vec2 vk = {(u[2 * b] - un[2 * b]) / tau, (u[2 * b + 1] - un[2 * b + 1]) / tau};
    const Vec2 zk = ctx.friction().gradient(vk);
    for (int c = 0; c < 2; ++c) {
      res.z(k, c) = zk[c];
      res.mu(k, c) = r[k] * zk[c];
    }
  }
  return res;
}

/// Adhesion stage: nodewise Gauss-Seidel on the lumped system
/// m v + m rho(v) + A chi + m beta(chi) = m (-gamma'(chi^n)
///   - lambda'(chi^n)(theta_s - theta_eq) - |u|^2/2), v = (chi - chi^n)/tau.
inline AdhesionResult solve_adhesion(const Eigen::VectorXd& theta_s_hat, const Eigen::VectorXd& u,
                                     const Eigen::VectorXd& chi_n, const StepContext& ctx) {
  const auto& forms = ctx.forms();
  const auto& model = ctx.model();
  const auto& adh = ctx.adhesion();
  const double tau = ctx.cfg().tau;
  const int ns = forms.num_surface();
  const Eigen::VectorXd& m = forms.lumped_surface;
  const SpMat& A = forms.surface_stiffness;

  Eigen::VectorXd rhs(ns), diagA(ns);
  for (int k = 0; k < ns; ++k) {
    const Vec2 uk = ctx.surface_displacement(u, k);
    rhs[k] = m[k] * (-model.gamma_prime(chi_n[k]) -
                     model.lambda_prime(chi_n[k]) * (theta_s_hat[k] - model.theta_eq) -
                     0.5 * dot(uk, uk));
    diagA[k] = A.coeff(k, k);
  }

  Eigen::VectorXd chi = chi_n;
  AdhesionResult res;
  constexpr int kMaxSweeps = 100000;
  bool converged = false;
  for (int sweep = 1; sweep <= kMaxSweeps; ++sweep) {
    double change = 0.0;
    for (int k = 0; k < ns; ++k) {
      double off = 0.0;
      for (SpMat::InnerIterator it(A, k); it; ++it)
        if (it.row() != k) off += it.value() * chi[it.row()];
      const double target = rhs[k] - off;
      const double mk = m[k], ak = diagA[k], cn = chi_n[k];
      auto f = [&](double c) {
        const double v = (c - cn) / tau;
        return mk * (v + adh.rho(v) + adh.beta(c)) + ak * c - target;
      };
      auto df = [&](double c) {
        const double v = (c - cn) / tau;
        return mk * ((1.0 + adh.rho_deriv(v)) / tau + adh.beta_deriv(c)) + ak;
      };
      const auto r = numerics::solve_increasing(f, df, chi[k], 1e-15, 200);
      if (!r.converged)
        throw SolverError("adhesion stage: scalar solve failed at surface node " +
                          std::to_string(k));
      change = std::max(change, std::abs(r.root - chi[k]));
      chi[k] = r.root;
    }
    res.sweeps = sweep;
    if (change <= 1e-14 * (1.0 + detail::sup_norm(chi))) {
      converged = true;
      break;
    }
  }
  if (!converged) throw SolverError("adhesion stage: Gauss-Seidel did not converge");

  res.chi = chi;
  res.xi.resize(ns);
  res.zeta.resize(ns);
  for (int k = 0; k < ns; ++k) {
    res.xi[k] = adh.beta(chi[k]);
    res.zeta[k] = adh.rho((chi[k] - chi_n[k]) / tau);
  }
  return res;
}

/// Boundary heat flux k(chi)(theta - theta_s) + c'(theta - theta_s)|R(eta)|
/// Psi_delta(u_t), nodewise on the contact surface, with the temperatures
/// taken from `hat`.
inline Eigen::VectorXd exchange_flux(const State& hat, const Eigen::VectorXd& u,
                                     const Eigen::VectorXd& u_prev, const Eigen::VectorXd& chi,
                                     const StepContext& ctx) {
  const auto& model = ctx.model();
  const double tau = ctx.cfg().tau;
  const int ns = ctx.forms().num_surface();
  const Eigen::VectorXd theta_tr = ctx.trace(hat.theta);
  const Eigen::VectorXd r = ctx.smoothed_pressure(u);
  Eigen::VectorXd F(ns);
  for (int k = 0; k < ns; ++k) {
    const int b = ctx.bulk_node_of_surface(k);
    const Vec2 vk = {(u[2 * b] - u_prev[2 * b]) / tau, (u[2 * b + 1] - u_prev[2 * b + 1]) / tau};
    const double gap = theta_tr[k] - hat.theta_s[k];
    F[k] = model.k(chi[k]) * gap +
           model.friction_coef_prime(gap) * r[k] * ctx.friction().value(vk);
  }
  return F;
}

namespace detail {

// Damped Newton for R(x) = 0 with a sparse Jacobian; backtracking on |R|.
template <class Residual, class Jacobian>
Eigen::VectorXd newton_solve(const char* stage, Eigen::VectorXd x, Residual&& residual,
                             Jacobian&& jacobian, const SolverConfig& cfg, int* iters) {
  std::vector<double> history;
  Eigen::SparseLU<SpMat> lu;
  bool analyzed = false;
  Eigen::VectorXd r = residual(x);
  for (int it = 1; it <= cfg.max_newton; ++it) {
    history.push_back(sup_norm(r));
    SpMat J = jacobian(x);
    J.makeCompressed();
    if (!analyzed) {
      lu.analyzePattern(J);
      analyzed = true;
    }
    lu.factorize(J);
    if (lu.info() != Eigen::Success)
      throw SolverError(std::string(stage) + ": Jacobian factorization failed");
    const Eigen::VectorXd step = -lu.solve(r);
    double a = 1.0;
    Eigen::VectorXd trial = x + step;
    Eigen::VectorXd rt = residual(trial);
    const double r0 = r.norm();
    while (rt.norm() > (1.0 - 1e-4 * a) * r0 && a > 1e-8 && r0 > 0.0) {
      a *= 0.5;
      trial = x + a * step;
      rt = residual(trial);
    }
    x = trial;
    r = rt;
    if (iters) *iters = it;
    if (sup_norm(a * step) <= cfg.tol_newton * (1.0 + sup_norm(x))) return x;
    // A tiny residual with a stalled line search is accepted too.
    if (a < 1e-8 && sup_norm(r) <= 1e-13 * (1.0 + r0)) return x;
  }
  history.push_back(sup_norm(r));
  throw SolverError(std::string(stage) + ": Newton did not converge in " +
                    std::to_string(cfg.max_newton) + " iterations; residual history [" +
                    history_string(history) + "]");
}

}  // namespace detail

/// Bulk temperature stage:
/// M_L (Lt(theta) - Lt(theta^n))/tau - D (u - u^n)/tau + K g(theta)
///   + T^T (m_s F) = <h, .>.
inline Eigen::VectorXd solve_bulk_temperature(const Eigen::VectorXd& theta_n,
                                              const Eigen::VectorXd& du,
                                              const Eigen::VectorXd& flux,
                                              const Eigen::VectorXd& heat,
                                              const StepContext& ctx, int* iters = nullptr) {
  const auto& forms = ctx.forms();
  const auto& model = ctx.model();
  const auto& ent = ctx.bulk_entropy();
  const double tau = ctx.cfg().tau;
  const int n = forms.num_bulk();
  Eigen::VectorXd wn(n);
  for (int i = 0; i < n; ++i) wn[i] = ent.tilde(theta_n[i]);
  const Eigen::VectorXd fixed = -forms.div_coupling * du / tau +
                                forms.trace_contact.transpose() *
                                    forms.lumped_surface.cwiseProduct(flux) -
                                heat;
  const Eigen::VectorXd& ml = forms.lumped_bulk;
  auto residual = [&](const Eigen::VectorXd& th) {
    Eigen::VectorXd w(n), gv(n);
    for (int i = 0; i < n; ++i) {
      w[i] = ent.tilde(th[i]);
      gv[i] = model.g(th[i]);
    }
    return Eigen::VectorXd(ml.cwiseProduct(w - wn) / tau + forms.stiffness * gv + fixed);
  };
  auto jacobian = [&](const Eigen::VectorXd& th) {
    Eigen::VectorXd d(n), gp(n);
    for (int i = 0; i < n; ++i) {
      d[i] = ml[i] * ent.tilde_deriv(th[i]) / tau;
      gp[i] = model.g_prime(th[i]);
    }
    SpMat J = forms.stiffness * gp.asDiagonal();
    for (int i = 0; i < n; ++i) J.coeffRef(i, i) += d[i];
    return J;
  };
  return detail::newton_solve("bulk temperature stage", theta_n, residual, jacobian, ctx.cfg(),
                              iters);
}

/// Surface temperature stage:
/// m_s (lt(theta_s) - lt(theta_s^n))/tau - m_s (lambda(chi) - lambda(chi^n))/tau
///   + K_s f_eps(theta_s) = m_s F.
inline Eigen::VectorXd solve_surface_temperature(const Eigen::VectorXd& theta_s_n,
                                                 const Eigen::VectorXd& chi,
                                                 const Eigen::VectorXd& chi_n,
                                                 const Eigen::VectorXd& flux,
                                                 const StepContext& ctx, int* iters = nullptr) {
  const auto& forms = ctx.forms();
  const auto& model = ctx.model();
  const auto& ent = ctx.surface_entropy();
  const double tau = ctx.cfg().tau;
  const int ns = forms.num_surface();
  const Eigen::VectorXd& m = forms.lumped_surface;
  Eigen::VectorXd fixed(ns);
  for (int k = 0; k < ns; ++k)
    fixed[k] = -m[k] * (ent.tilde(theta_s_n[k]) +
                        (model.lambda(chi[k]) - model.lambda(chi_n[k]))) / tau -
               m[k] * flux[k];
  auto residual = [&](const Eigen::VectorXd& th) {
    Eigen::VectorXd w(ns), fv(ns);
    for (int k = 0; k < ns; ++k) {
      w[k] = ent.tilde(th[k]);
      fv[k] = ent.flux(th[k]);
    }
    return Eigen::VectorXd(m.cwiseProduct(w) / tau + forms.surface_stiffness * fv + fixed);
  };
  auto jacobian = [&](const Eigen::VectorXd& th) {
    Eigen::VectorXd d(ns), fp(ns);
    for (int k = 0; k < ns; ++k) {
      const double lp = ent.tilde_deriv(th[k]);
      d[k] = m[k] * lp / tau;
      fp[k] = 1.0 / lp;
    }
    SpMat J = forms.surface_stiffness * fp.asDiagonal();
    for (int k = 0; k < ns; ++k) J.coeffRef(k, k) += d[k];
    return J;
  };
  return detail::newton_solve("surface temperature stage", theta_s_n, residual, jacobian,
                              ctx.cfg(), iters);
}

/// Loads sampled at the new time level.
struct StepLoads {
  Eigen::VectorXd heat;      ///< bulk dual vector
  Eigen::VectorXd momentum;  ///< momentum dual vector
};

inline StepLoads sample_loads(const AssembledForms& forms, const Loads& loads, double t) {
  return {heat_load(forms, loads, t), momentum_load(forms, loads, t)};
}

struct StepInfo {
  int picard_iterations = 0;
  std::vector<double> changes;
};

/// Fills the auxiliary selections for a state whose rate is unknown: eta from
/// u, z = mu = 0, xi = beta(chi), zeta = rho(0) = 0.
inline void initialize_aux(State& s, const StepContext& ctx) {
  const int ns = ctx.forms().num_surface();
  s.eta = ctx.contact_dual(s.u);
  s.z = SurfaceVectors::Zero(ns, 2);
  s.mu = SurfaceVectors::Zero(ns, 2);
  s.xi.resize(ns);
  for (int k = 0; k < ns; ++k) s.xi[k] = ctx.adhesion().beta(s.chi[k]);
  s.zeta = Eigen::VectorXd::Zero(ns);
}

/// One time step: fixed-point iteration of the three stages starting from the
/// previous state, until the largest relative change of (theta, theta_s, u,
/// chi) drops below tol_picard.
inline State step(const State& prev, const StepLoads& loads, const StepContext& ctx,
                  StepInfo* info = nullptr) {
  const auto& cfg = ctx.cfg();
  State hat = prev;
  State out;
  std::vector<double> changes;
  const double w = cfg.picard_relaxation;
  auto rel_change = [&](const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    return detail::sup_norm(a - b) / std::max(detail::sup_norm(a), cfg.picard_floor);
  };
  for (int it = 1; it <= cfg.max_picard; ++it) {
    const MomentumResult mom = solve_momentum(hat, prev, loads.momentum, ctx);
    const AdhesionResult adh = solve_adhesion(hat.theta_s, mom.u, prev.chi, ctx);
    const Eigen::VectorXd flux = exchange_flux(hat, mom.u, prev.u, adh.chi, ctx);
    const Eigen::VectorXd theta =
        solve_bulk_temperature(prev.theta, mom.u - prev.u, flux, loads.heat, ctx);
    const Eigen::VectorXd theta_s =
        solve_surface_temperature(prev.theta_s, adh.chi, prev.chi, flux, ctx);

    const double change = std::max({rel_change(theta, hat.theta), rel_change(theta_s, hat.theta_s),
                                     rel_change(mom.u, hat.u), rel_change(adh.chi, hat.chi)});
    changes.push_back(change);

    out.time = prev.time + cfg.tau;
    out.theta = theta;
    out.theta_s = theta_s;
    out.u = mom.u;
    out.chi = adh.chi;
    out.eta = mom.eta;
    out.mu = mom.mu;
    out.z = mom.z;
    out.xi = adh.xi;
    out.zeta = adh.zeta;
    if (change < cfg.tol_picard) {
      if (info) {
        info->picard_iterations = it;
        info->changes = changes;
      }
      return out;
    }
    hat.theta = w * theta + (1.0 - w) * hat.theta;
    hat.theta_s = w * theta_s + (1.0 - w) * hat.theta_s;
    hat.u = w * mom.u + (1.0 - w) * hat.u;
    hat.chi = w * adh.chi + (1.0 - w) * hat.chi;
  }
  std::ostringstream os;
  os << "fixed-point iteration did not converge in " << cfg.max_picard
     << " iterations at t=" << prev.time + cfg.tau << "; change history ["
     << detail::history_string(changes) << "]";
  throw SolverError(os.str());
}

}  // namespace adhesim
