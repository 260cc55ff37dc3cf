// SPDX-License-Identifier: Apache-2.0
#pragma once

// Penalized contact, smoothed friction, Yosida maps of the adhesion
// constraints and the nonlocal smoother acting on the contact pressure.

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <vector>

#include "adhesim/errors.hpp"
#include "adhesim/mesh.hpp"

namespace adhesim {

using Vec2 = std::array<double, 2>;

inline double dot(const Vec2& a, const Vec2& b) { return a[0] * b[0] + a[1] * b[1]; }
inline double norm(const Vec2& a) { return std::hypot(a[0], a[1]); }

/// Outward normal and tangent of the flat contact edge.
inline constexpr Vec2 kContactNormal{0.0, -1.0};
inline constexpr Vec2 kContactTangent{1.0, 0.0};

inline double normal_component(const Vec2& u) { return dot(u, kContactNormal); }
inline double tangential_component(const Vec2& v) { return dot(v, kContactTangent); }

/// Yosida regularization of the indicator of {u_N <= 0}.
struct ContactPotential {
  double eps;

  double value(const Vec2& u) const {
    const double p = std::max(normal_component(u), 0.0);
    return 0.5 * p * p / eps;
  }
  Vec2 gradient(const Vec2& u) const {
    const double p = std::max(normal_component(u), 0.0) / eps;
    return {p * kContactNormal[0], p * kContactNormal[1]};
  }
  /// d(gradient)/du = H(u_N) n n^T / eps; returns the scalar factor.
  double curvature(const Vec2& u) const { return normal_component(u) > 0.0 ? 1.0 / eps : 0.0; }
};

inline Vec2 contact_force(const Vec2& u, double eps) { return ContactPotential{eps}.gradient(u); }

/// sqrt(|v_T|^2 + delta^2) - delta. At delta = 0 this is |v_T| and the
/// gradient at v_T = 0 is taken as the zero selection.
struct FrictionPotential {
  double delta = 0.0;

  double value(const Vec2& v) const {
    const double vt = tangential_component(v);
    return std::sqrt(vt * vt + delta * delta) - delta;
  }
  /// Scalar tangential component of the gradient.
  double gradient_t(const Vec2& v) const {
    const double vt = tangential_component(v);
    const double s = std::sqrt(vt * vt + delta * delta);
    return s > 0.0 ? vt / s : 0.0;
  }
  Vec2 gradient(const Vec2& v) const {
    const double g = gradient_t(v);
    return {g * kContactTangent[0], g * kContactTangent[1]};
  }
  /// d(gradient_t)/d v_T.
  double curvature(const Vec2& v) const {
    const double vt = tangential_component(v);
    const double s2 = vt * vt + delta * delta;
    if (s2 == 0.0) return 0.0;
    return delta * delta / (s2 * std::sqrt(s2));
  }
};

/// DPhi_eps(u) . grad Psi_delta(v); zero by construction.
inline double orthogonality_check(const Vec2& u, const Vec2& v, double eps, double delta) {
  return dot(contact_force(u, eps), FrictionPotential{delta}.gradient(v));
}

/// Yosida maps of the subdifferentials of I_[0,1] (beta) and I_(-inf,0]
/// (rho), with the primitive of beta for the energy.
struct AdhesionConstraints {
  double eps;

  double beta(double chi) const { return (std::min(chi, 0.0) + std::max(chi - 1.0, 0.0)) / eps; }
  double beta_deriv(double chi) const { return (chi < 0.0 || chi > 1.0) ? 1.0 / eps : 0.0; }
  double beta_hat(double chi) const {
    const double a = std::min(chi, 0.0), b = std::max(chi - 1.0, 0.0);
    return 0.5 * (a * a + b * b) / eps;
  }
  double rho(double v) const { return std::max(v, 0.0) / eps; }
  double rho_deriv(double v) const { return v > 0.0 ? 1.0 / eps : 0.0; }
  double rho_hat(double v) const {
    const double p = std::max(v, 0.0);
    return 0.5 * p * p / eps;
  }
};

/// Friction traction c(gap) |R(eta)| grad Psi_delta(vdot). `Model` must
/// expose `friction_coef`.
template <class Model>
Vec2 friction_traction(double theta_gap, double r_eta, const Vec2& vdot, const Model& model,
                       double delta) {
  const double s = model.friction_coef(theta_gap) * r_eta;
  const Vec2 g = FrictionPotential{delta}.gradient(vdot);
  return {s * g[0], s * g[1]};
}

/// Gaussian mollifier on the contact edge.
struct NonlocalSmoother {
  double kernel_width = 0.0;  ///< sigma_R in length units
  double nu = 1.0;            ///< metadata only
};

/// The smoother bound to one surface mesh: p = M^{-1} eta with the
/// consistent mass M, then (R p)_i = sum_j S_ij m_j p_j. The kernel S is a
/// symmetric scaling d_i w_ij d_j of the Gaussian weights w_ij with
/// sum_j S_ij m_j = 1, so constants are reproduced and sum_i m_i (R p)_i =
/// sum_j m_j p_j.
class SmootherOperator {
 public:
  static constexpr double kScalingTol = 1e-14;
  static constexpr int kScalingMaxIter = 20000;

  SmootherOperator(const NonlocalSmoother& sm, const SurfaceMesh& s) {
    if (!(sm.kernel_width > 0.0)) throw ConfigError("smoother width must be positive");
    const int n = s.num_nodes();
    const auto ml = s.lumped_mass();
    m_ = Eigen::Map<const Eigen::VectorXd>(ml.data(), n);
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(n, n);
    for (int e = 0; e < static_cast<int>(s.elements.size()); ++e) {
      const double h = s.element_length(e);
      const auto& el = s.elements[e];
      M(el[0], el[0]) += h / 3.0;
      M(el[1], el[1]) += h / 3.0;
      M(el[0], el[1]) += h / 6.0;
      M(el[1], el[0]) += h / 6.0;
    }
    mass_ = M.ldlt();
    if (mass_.info() != Eigen::Success || !(M.diagonal().array() > 0.0).all())
      throw SolverError("surface mass matrix is singular");

    Eigen::MatrixXd W(n, n);
    const double s2 = 2.0 * sm.kernel_width * sm.kernel_width;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) W(i, j) = std::exp(-(s.x[i] - s.x[j]) * (s.x[i] - s.x[j]) / s2);
    // Symmetric Sinkhorn scaling d_i (W diag(m) d)_i = 1.
    Eigen::VectorXd d = Eigen::VectorXd::Ones(n);
    bool converged = false;
    for (int it = 0; it < kScalingMaxIter; ++it) {
      const Eigen::VectorXd row = W * m_.cwiseProduct(d);
      const Eigen::VectorXd dn = (d.array() / row.array()).sqrt();
      const double change = ((dn - d).array().abs() / dn.array()).maxCoeff();
      d = dn;
      if (change < kScalingTol) {
        converged = true;
        break;
      }
    }
    if (!converged) throw SolverError("smoother kernel scaling did not converge");
    S_ = d.asDiagonal() * W * d.asDiagonal();
    SM_ = S_ * m_.asDiagonal();
  }

  /// Riesz representative of a dual vector with respect to the surface mass.
  Eigen::VectorXd representative(const Eigen::VectorXd& eta) const { return mass_.solve(eta); }

  Eigen::VectorXd apply(const Eigen::VectorXd& eta) const { return SM_ * representative(eta); }

  /// Mollification of a nodal field (skipping the mass solve).
  Eigen::VectorXd apply_nodal(const Eigen::VectorXd& p) const { return SM_ * p; }

  const Eigen::MatrixXd& kernel() const { return S_; }
  const Eigen::VectorXd& lumped_mass() const { return m_; }

 private:
  Eigen::VectorXd m_;
  Eigen::LDLT<Eigen::MatrixXd> mass_;
  Eigen::MatrixXd S_, SM_;
};

inline Eigen::VectorXd apply_smoother(const NonlocalSmoother& sm, const Eigen::VectorXd& eta,
                                      const SurfaceMesh& surface) {
  return SmootherOperator(sm, surface).apply(eta);
}

}  // namespace adhesim
