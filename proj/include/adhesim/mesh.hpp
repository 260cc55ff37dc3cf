// SPDX-License-Identifier: Apache-2.0
#pragma once

// Structured triangulation of the rectangle [0,Lx] x [0,Ly]. The bottom edge is
// the contact surface, the top edge is clamped, the vertical sides are free.

#include <array>
#include <cmath>
#include <numeric>
#include <ostream>
#include <string>
#include <vector>

#include "adhesim/errors.hpp"

namespace adhesim {

enum class BoundaryTag { interior, dirichlet, neumann, contact };

/// P1 mesh of the contact edge. Node k sits at bulk node `bulk_node[k]`.
struct SurfaceMesh {
  std::vector<int> bulk_node;
  std::vector<double> x;
  std::vector<std::array<int, 2>> elements;
  std::array<double, 2> normal{0.0, -1.0};
  std::array<double, 2> tangent{1.0, 0.0};
  /// First and last node; the Neumann condition for chi acts there.
  std::array<int, 2> endpoints{0, 0};

  int num_nodes() const { return static_cast<int>(x.size()); }
  double element_length(int e) const {
    return std::abs(x[elements[e][1]] - x[elements[e][0]]);
  }
  double length() const {
    double s = 0.0;
    for (int e = 0; e < static_cast<int>(elements.size()); ++e) s += element_length(e);
    return s;
  }
  double mesh_size() const {
    double h = 0.0;
    for (int e = 0; e < static_cast<int>(elements.size()); ++e) h = std::max(h, element_length(e));
    return h;
  }
  /// Row sums of the consistent mass matrix.
  std::vector<double> lumped_mass() const {
    std::vector<double> m(x.size(), 0.0);
    for (int e = 0; e < static_cast<int>(elements.size()); ++e) {
      const double h = element_length(e);
      m[elements[e][0]] += 0.5 * h;
      m[elements[e][1]] += 0.5 * h;
    }
    return m;
  }
};

struct Mesh {
  int nx = 0, ny = 0;
  double Lx = 0.0, Ly = 0.0;
  std::vector<std::array<double, 2>> nodes;
  std::vector<std::array<int, 3>> triangles;
  std::vector<BoundaryTag> tags;
  std::vector<int> gamma_d, gamma_n, gamma_c;
  SurfaceMesh surface;

  int num_nodes() const { return static_cast<int>(nodes.size()); }
  int num_triangles() const { return static_cast<int>(triangles.size()); }
  int node_id(int i, int j) const { return j * (nx + 1) + i; }
  double hx() const { return Lx / nx; }
  double hy() const { return Ly / ny; }

  double triangle_area(int t) const {
    const auto& a = nodes[triangles[t][0]];
    const auto& b = nodes[triangles[t][1]];
    const auto& c = nodes[triangles[t][2]];
    return 0.5 * ((b[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (b[1] - a[1]));
  }

  /// Plain-text listing: "id x y" per node, then "id n1 n2 n3" per triangle.
  void export_text(std::ostream& os) const {
    os.precision(17);
    os << "# nodes " << nodes.size() << '\n';
    for (int i = 0; i < num_nodes(); ++i)
      os << i << ' ' << nodes[i][0] << ' ' << nodes[i][1] << '\n';
    os << "# triangles " << triangles.size() << '\n';
    for (int t = 0; t < num_triangles(); ++t)
      os << t << ' ' << triangles[t][0] << ' ' << triangles[t][1] << ' ' << triangles[t][2] << '\n';
  }
};

/// nx*ny cells, each split into two counterclockwise right triangles with the
/// diagonal direction alternating in a checkerboard. All angles are at most
/// 90 degrees, so the P1 Laplacian is an M-matrix.
inline Mesh build_mesh(int nx, int ny, double Lx, double Ly) {
  if (nx < 2 || ny < 2)
    throw ConfigError("mesh needs at least 2 cells per direction, got nx=" + std::to_string(nx) +
                      ", ny=" + std::to_string(ny));
  if (!(Lx > 0.0) || !(Ly > 0.0) || !std::isfinite(Lx) || !std::isfinite(Ly))
    throw ConfigError("mesh extents must be positive and finite");

  Mesh m;
  m.nx = nx;
  m.ny = ny;
  m.Lx = Lx;
  m.Ly = Ly;
  const double hx = Lx / nx, hy = Ly / ny;
  m.nodes.reserve((nx + 1) * (ny + 1));
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i <= nx; ++i) m.nodes.push_back({i * hx, j * hy});
  // Snap the far edges so that coordinates are exact.
  for (int j = 0; j <= ny; ++j) m.nodes[m.node_id(nx, j)][0] = Lx;
  for (int i = 0; i <= nx; ++i) m.nodes[m.node_id(i, ny)][1] = Ly;

  m.triangles.reserve(2 * nx * ny);
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const int a = m.node_id(i, j), b = m.node_id(i + 1, j);
      const int c = m.node_id(i + 1, j + 1), d = m.node_id(i, j + 1);
      if ((i + j) % 2 == 0) {
        m.triangles.push_back({a, b, c});
        m.triangles.push_back({a, c, d});
      } else {
        m.triangles.push_back({a, b, d});
        m.triangles.push_back({b, c, d});
      }
    }
  }

  m.tags.assign(m.nodes.size(), BoundaryTag::interior);
  for (int i = 0; i <= nx; ++i) {
    m.tags[m.node_id(i, 0)] = BoundaryTag::contact;
    m.tags[m.node_id(i, ny)] = BoundaryTag::dirichlet;
  }
  for (int j = 1; j < ny; ++j) {
    m.tags[m.node_id(0, j)] = BoundaryTag::neumann;
    m.tags[m.node_id(nx, j)] = BoundaryTag::neumann;
  }
  for (int n = 0; n < m.num_nodes(); ++n) {
    switch (m.tags[n]) {
      case BoundaryTag::dirichlet: m.gamma_d.push_back(n); break;
      case BoundaryTag::neumann: m.gamma_n.push_back(n); break;
      case BoundaryTag::contact: m.gamma_c.push_back(n); break;
      case BoundaryTag::interior: break;
    }
  }

  auto& s = m.surface;
  for (int i = 0; i <= nx; ++i) {
    s.bulk_node.push_back(m.node_id(i, 0));
    s.x.push_back(m.nodes[m.node_id(i, 0)][0]);
  }
  for (int i = 0; i < nx; ++i) s.elements.push_back({i, i + 1});
  s.endpoints = {0, nx};
  return m;
}

}  // namespace adhesim
