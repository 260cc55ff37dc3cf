// SPDX-License-Identifier: Apache-2.0
#pragma once

// P1 assembly of every bilinear form of the weak system on a structured mesh.

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>
#include <array>
#include <cmath>
#include <memory>
#include <vector>

#include "adhesim/errors.hpp"
#include "adhesim/mesh.hpp"
#include "adhesim/model.hpp"

namespace adhesim {

using SpMat = Eigen::SparseMatrix<double>;
using Triplets = std::vector<Eigen::Triplet<double>>;

struct AssembledForms {
  Mesh mesh;
  SpMat mass_bulk;           // N x N consistent
  Eigen::VectorXd lumped_bulk;
  SpMat stiffness;           // N x N, unit coefficient
  SpMat elasticity_a;        // 2N x 2N, clamped rows/cols replaced by identity
  SpMat viscosity_b;         // 2N x 2N, same treatment
  SpMat div_coupling;        // N x 2N, entries int phi_i div psi_j
  SpMat trace_contact;       // Ns x N restriction
  SpMat mass_surface;        // Ns x Ns consistent
  Eigen::VectorXd lumped_surface;
  SpMat surface_stiffness;   // Ns x Ns Neumann Laplacian
  std::vector<bool> clamped_dof;  // size 2N
  std::vector<int> free_dofs;

  std::shared_ptr<Eigen::SimplicialLDLT<SpMat>> dual_solver;

  int num_bulk() const { return mesh.num_nodes(); }
  int num_surface() const { return mesh.surface.num_nodes(); }

  /// Scalar stiffness with a per-triangle coefficient.
  SpMat stiffness_weighted(const std::vector<double>& coeff) const;
};

namespace detail {

struct P1Triangle {
  double area;
  std::array<double, 3> bx, by;  // gradients of the barycentric functions
};

inline P1Triangle p1_triangle(const Mesh& m, int t) {
  const auto& tri = m.triangles[t];
  const auto& a = m.nodes[tri[0]];
  const auto& b = m.nodes[tri[1]];
  const auto& c = m.nodes[tri[2]];
  P1Triangle e;
  e.area = m.triangle_area(t);
  const double inv = 1.0 / (2.0 * e.area);
  e.bx = {(b[1] - c[1]) * inv, (c[1] - a[1]) * inv, (a[1] - b[1]) * inv};
  e.by = {(c[0] - b[0]) * inv, (a[0] - c[0]) * inv, (b[0] - a[0]) * inv};
  return e;
}

inline Eigen::Matrix<double, 3, 6> strain_matrix(const P1Triangle& e) {
  Eigen::Matrix<double, 3, 6> B = Eigen::Matrix<double, 3, 6>::Zero();
  for (int k = 0; k < 3; ++k) {
    B(0, 2 * k) = e.bx[k];
    B(1, 2 * k + 1) = e.by[k];
    B(2, 2 * k) = e.by[k];
    B(2, 2 * k + 1) = e.bx[k];
  }
  return B;
}

inline SpMat elastic_form(const Mesh& m, const ElasticTensor& C, const std::vector<bool>& clamped) {
  const int n = 2 * m.num_nodes();
  Triplets trip;
  trip.reserve(36 * m.num_triangles() + n);
  for (int t = 0; t < m.num_triangles(); ++t) {
    const auto e = p1_triangle(m, t);
    const auto B = strain_matrix(e);
    const Eigen::Matrix<double, 6, 6> ke = e.area * B.transpose() * C.voigt * B;
    for (int a = 0; a < 6; ++a) {
      const int ra = 2 * m.triangles[t][a / 2] + a % 2;
      if (clamped[ra]) continue;
      for (int b = 0; b < 6; ++b) {
        const int cb = 2 * m.triangles[t][b / 2] + b % 2;
        if (clamped[cb]) continue;
        trip.emplace_back(ra, cb, ke(a, b));
      }
    }
  }
  for (int d = 0; d < n; ++d)
    if (clamped[d]) trip.emplace_back(d, d, 1.0);
  SpMat A(n, n);
  A.setFromTriplets(trip.begin(), trip.end());
  return A;
}

}  // namespace detail

inline SpMat AssembledForms::stiffness_weighted(const std::vector<double>& coeff) const {
  const int n = num_bulk();
  Triplets trip;
  trip.reserve(9 * mesh.num_triangles());
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const auto e = detail::p1_triangle(mesh, t);
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b)
        trip.emplace_back(mesh.triangles[t][a], mesh.triangles[t][b],
                          coeff[t] * e.area * (e.bx[a] * e.bx[b] + e.by[a] * e.by[b]));
  }
  SpMat K(n, n);
  K.setFromTriplets(trip.begin(), trip.end());
  return K;
}

/// Assembles all forms. Throws ValidationError when Ke or Kv is not positive
/// definite.
inline AssembledForms assemble(const Mesh& mesh, const MaterialModel& material) {
  if (!material.Ke.positive_definite())
    throw ValidationError("elastic tensor Ke is not symmetric positive definite");
  if (!material.Kv.positive_definite())
    throw ValidationError("viscous tensor Kv is not symmetric positive definite");

  AssembledForms f;
  f.mesh = mesh;
  const int n = mesh.num_nodes();
  const int ns = mesh.surface.num_nodes();

  f.clamped_dof.assign(2 * n, false);
  for (int node : mesh.gamma_d) f.clamped_dof[2 * node] = f.clamped_dof[2 * node + 1] = true;
  for (int d = 0; d < 2 * n; ++d)
    if (!f.clamped_dof[d]) f.free_dofs.push_back(d);

  Triplets tm, tk, td;
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const auto e = detail::p1_triangle(mesh, t);
    const auto& tri = mesh.triangles[t];
    for (int a = 0; a < 3; ++a) {
      for (int b = 0; b < 3; ++b) {
        tm.emplace_back(tri[a], tri[b], e.area * (a == b ? 2.0 : 1.0) / 12.0);
        tk.emplace_back(tri[a], tri[b], e.area * (e.bx[a] * e.bx[b] + e.by[a] * e.by[b]));
        // int phi_a div psi_(b, c) with div psi_(b,0) = bx[b], div psi_(b,1) = by[b].
        const int cx = 2 * tri[b], cy = 2 * tri[b] + 1;
        if (!f.clamped_dof[cx]) td.emplace_back(tri[a], cx, e.area / 3.0 * e.bx[b]);
        if (!f.clamped_dof[cy]) td.emplace_back(tri[a], cy, e.area / 3.0 * e.by[b]);
      }
    }
  }
  f.mass_bulk.resize(n, n);
  f.mass_bulk.setFromTriplets(tm.begin(), tm.end());
  f.stiffness.resize(n, n);
  f.stiffness.setFromTriplets(tk.begin(), tk.end());
  f.div_coupling.resize(n, 2 * n);
  f.div_coupling.setFromTriplets(td.begin(), td.end());
  f.lumped_bulk = f.mass_bulk * Eigen::VectorXd::Ones(n);

  f.elasticity_a = detail::elastic_form(mesh, material.Ke, f.clamped_dof);
  f.viscosity_b = detail::elastic_form(mesh, material.Kv, f.clamped_dof);

  Triplets tt;
  for (int k = 0; k < ns; ++k) tt.emplace_back(k, mesh.surface.bulk_node[k], 1.0);
  f.trace_contact.resize(ns, n);
  f.trace_contact.setFromTriplets(tt.begin(), tt.end());

  Triplets sm, sk;
  for (int e = 0; e < static_cast<int>(mesh.surface.elements.size()); ++e) {
    const double h = mesh.surface.element_length(e);
    const auto& el = mesh.surface.elements[e];
    for (int a = 0; a < 2; ++a) {
      for (int b = 0; b < 2; ++b) {
        sm.emplace_back(el[a], el[b], h * (a == b ? 2.0 : 1.0) / 6.0);
        sk.emplace_back(el[a], el[b], (a == b ? 1.0 : -1.0) / h);
      }
    }
  }
  f.mass_surface.resize(ns, ns);
  f.mass_surface.setFromTriplets(sm.begin(), sm.end());
  f.surface_stiffness.resize(ns, ns);
  f.surface_stiffness.setFromTriplets(sk.begin(), sk.end());
  f.lumped_surface = f.mass_surface * Eigen::VectorXd::Ones(ns);

  f.dual_solver = std::make_shared<Eigen::SimplicialLDLT<SpMat>>();
  const SpMat mk = f.mass_bulk + f.stiffness;
  f.dual_solver->compute(mk);
  if (f.dual_solver->info() != Eigen::Success)
    throw SolverError("factorization of M + K failed");
  return f;
}

/// sqrt(r^T (M + K)^{-1} r), a discrete H^1 dual norm of a bulk dual vector.
inline double dual_norm_surrogate(const AssembledForms& f, const Eigen::VectorXd& r) {
  if (r.size() != f.num_bulk()) throw SolverError("dual vector has wrong length");
  const Eigen::VectorXd y = f.dual_solver->solve(r);
  if (f.dual_solver->info() != Eigen::Success) throw SolverError("dual norm solve failed");
  return std::sqrt(std::max(r.dot(y), 0.0));
}

/// Nodal interpolant of a spatial expression on the bulk nodes.
inline Eigen::VectorXd interpolate(const Mesh& m, const FieldExpr& e) {
  Eigen::VectorXd v(m.num_nodes());
  for (int i = 0; i < m.num_nodes(); ++i) v[i] = e(m.nodes[i][0], m.nodes[i][1]);
  return v;
}

/// Nodal interpolant on the contact surface.
inline Eigen::VectorXd interpolate_surface(const Mesh& m, const FieldExpr& e) {
  Eigen::VectorXd v(m.surface.num_nodes());
  for (int k = 0; k < m.surface.num_nodes(); ++k) {
    const auto& p = m.nodes[m.surface.bulk_node[k]];
    v[k] = e(p[0], p[1]);
  }
  return v;
}

/// Heat source as a bulk dual vector at time t.
inline Eigen::VectorXd heat_load(const AssembledForms& f, const Loads& loads, double t) {
  return f.mass_bulk * (interpolate(f.mesh, loads.heat) * loads.heat_time(t));
}

/// Body force plus side traction as a momentum dual vector at time t; clamped
/// entries are zero.
inline Eigen::VectorXd momentum_load(const AssembledForms& f, const Loads& loads, double t) {
  const Mesh& m = f.mesh;
  const int n = m.num_nodes();
  Eigen::VectorXd F = Eigen::VectorXd::Zero(2 * n);
  const double sb = loads.body_time(t);
  if (sb != 0.0 && (loads.body_force[0] != 0.0 || loads.body_force[1] != 0.0)) {
    const Eigen::VectorXd prof = interpolate(m, loads.body_profile);
    const Eigen::VectorXd w = f.mass_bulk * prof;
    for (int i = 0; i < n; ++i) {
      F[2 * i] += sb * loads.body_force[0] * w[i];
      F[2 * i + 1] += sb * loads.body_force[1] * w[i];
    }
  }
  const double st = loads.traction_time(t);
  if (st != 0.0 && (loads.traction[0] != 0.0 || loads.traction[1] != 0.0)) {
    for (int side : {0, m.nx}) {
      for (int j = 0; j < m.ny; ++j) {
        const int a = m.node_id(side, j), b = m.node_id(side, j + 1);
        const double h = m.nodes[b][1] - m.nodes[a][1];
        for (int node : {a, b}) {
          F[2 * node] += st * loads.traction[0] * 0.5 * h;
          F[2 * node + 1] += st * loads.traction[1] * 0.5 * h;
        }
      }
    }
  }
  for (int d = 0; d < 2 * n; ++d)
    if (f.clamped_dof[d]) F[d] = 0.0;
  return F;
}

}  // namespace adhesim
