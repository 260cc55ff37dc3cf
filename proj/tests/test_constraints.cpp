// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "adhesim/constraints.hpp"
#include "adhesim/model.hpp"
#include "support.hpp"

using namespace adhesim;
namespace at = adhesim::testing;

TEST(Contact, Examples) {
  const Vec2 f0 = contact_force({0.3, 1.0}, 0.1);  // u_N = -1, separated
  EXPECT_EQ(f0[0], 0.0);
  EXPECT_EQ(f0[1], 0.0);
  const Vec2 f1 = contact_force({0.0, -0.2}, 0.1);  // u_N = 0.2
  EXPECT_NEAR(f1[0], 2.0 * kContactNormal[0], 1e-14);
  EXPECT_NEAR(f1[1], 2.0 * kContactNormal[1], 1e-14);
  const Vec2 f2 = contact_force({0.5, 0.0}, 0.1);
  EXPECT_EQ(f2[1], 0.0);
}

TEST(Contact, GradientAndCurvatureMatchDifferences) {
  const ContactPotential c{0.05};
  for (double uy : {-0.3, -0.01, 0.02, 0.4}) {
    const double h = 1e-6;
    const double fd = (c.value({0.0, uy + h}) - c.value({0.0, uy - h})) / (2 * h);
    EXPECT_NEAR(c.gradient({0.0, uy})[1], fd, 1e-6);
    const double cd =
        (c.gradient({0.0, uy + h})[1] - c.gradient({0.0, uy - h})[1]) / (2 * h);
    EXPECT_NEAR(c.curvature({0.0, uy}), cd, 1e-4);
  }
}

TEST(Friction, PotentialProperties) {
  const FrictionPotential f{1e-3};
  EXPECT_EQ(f.value({0.0, 0.0}), 0.0);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> d(-2.0, 2.0);
  for (int i = 0; i < 1000; ++i) {
    const Vec2 v{d(rng), d(rng)};
    const Vec2 g = f.gradient(v);
    EXPECT_LE(norm(g), 1.0 + 1e-15);
    // Convexity with Psi(0) = 0 gives grad(v).v >= Psi(v) >= 0.
    EXPECT_GE(dot(g, v), f.value(v) - 1e-15);
    EXPECT_GE(f.value(v), 0.0);
  }
  const FrictionPotential sharp{0.0};
  EXPECT_EQ(sharp.gradient_t({0.0, 1.0}), 0.0);
  EXPECT_DOUBLE_EQ(sharp.value({-0.7, 3.0}), 0.7);
}

TEST(Friction, CurvatureMatchesDifference) {
  const FrictionPotential f{0.1};
  for (double vt : {-1.0, -0.05, 0.0, 0.2, 3.0}) {
    const double h = 1e-6;
    const double cd = (f.gradient_t({vt + h, 0.0}) - f.gradient_t({vt - h, 0.0})) / (2 * h);
    EXPECT_NEAR(f.curvature({vt, 0.0}), cd, 1e-6) << vt;
  }
}

TEST(Orthogonality, RandomInputsVanishExactly) {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> d(-5.0, 5.0);
  std::uniform_real_distribution<double> le(-4.0, 0.0);
  for (int i = 0; i < 10000; ++i) {
    const Vec2 u{d(rng), d(rng)}, v{d(rng), d(rng)};
    const double eps = std::pow(10.0, le(rng));
    EXPECT_EQ(orthogonality_check(u, v, eps, 1e-6), 0.0);
  }
}

TEST(Adhesion, YosidaMaps) {
  const AdhesionConstraints a{0.1};
  EXPECT_NEAR(a.beta(-0.1), -1.0, 1e-14);
  EXPECT_EQ(a.beta(0.5), 0.0);
  EXPECT_NEAR(a.beta(1.2), 2.0, 1e-13);
  EXPECT_EQ(a.rho(-3.0), 0.0);
  EXPECT_NEAR(a.rho(0.3), 3.0, 1e-14);
  EXPECT_EQ(a.rho(0.0), 0.0);
  for (double x : at::linspace(-1.0, 2.0, 61)) {
    EXPECT_GE(a.beta_hat(x), 0.0);
    const double h = 1e-6;  // a difference across a kink is off by h/(4 eps)
    EXPECT_NEAR((a.beta_hat(x + h) - a.beta_hat(x - h)) / (2 * h), a.beta(x), 1e-5);
    EXPECT_NEAR((a.rho_hat(x + h) - a.rho_hat(x - h)) / (2 * h), a.rho(x), 1e-5);
  }
}

TEST(Adhesion, NodewiseGrowthIsSuppressed) {
  // v + rho(v) = r has v = r eps/(1+eps) for r > 0 and v = r for r <= 0.
  for (double eps : {0.1, 0.05}) {
    const AdhesionConstraints a{eps};
    for (double r : {-2.0, 0.5, 3.0}) {
      auto f = [&](double v) { return v + a.rho(v) - r; };
      const double v = at::bisect(f, -10.0, 10.0, 1e-15);
      EXPECT_NEAR(v, r > 0 ? r * eps / (1 + eps) : r, 1e-12);
    }
  }
}

TEST(FrictionTraction, BoundAndDissipativity) {
  const auto m = MaterialModel::defaults();
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> d(-3.0, 3.0);
  for (int i = 0; i < 500; ++i) {
    const double gap = d(rng), r = std::abs(d(rng));
    const Vec2 v{d(rng), d(rng)};
    const Vec2 t = friction_traction(gap, r, v, m, 1e-6);
    EXPECT_LE(norm(t), m.friction_coef(gap) * r * (1 + 1e-14));
    EXPECT_GE(dot(t, v), 0.0);
    EXPECT_EQ(dot(t, kContactNormal), 0.0);
  }
  const Vec2 t = friction_traction(0.0, 2.0, {1.0, 0.0}, m, 0.0);
  EXPECT_NEAR(t[0], 2.0, 1e-14);
}

namespace {

SurfaceMesh uniform_surface(int n, double L) {
  SurfaceMesh s;
  for (int i = 0; i <= n; ++i) {
    s.bulk_node.push_back(i);
    s.x.push_back(L * i / n);
  }
  for (int i = 0; i < n; ++i) s.elements.push_back({i, i + 1});
  s.endpoints = {0, n};
  return s;
}

Eigen::MatrixXd consistent_mass(const SurfaceMesh& s) {
  const int n = s.num_nodes();
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(n, n);
  for (int e = 0; e < static_cast<int>(s.elements.size()); ++e) {
    const double h = s.element_length(e);
    const auto& el = s.elements[e];
    M(el[0], el[0]) += h / 3;
    M(el[1], el[1]) += h / 3;
    M(el[0], el[1]) += h / 6;
    M(el[1], el[0]) += h / 6;
  }
  return M;
}

}  // namespace

TEST(Smoother, ReproducesConstants) {
  const auto s = uniform_surface(16, 2.0);
  const SmootherOperator op(NonlocalSmoother{3.0 * 0.125, 1.0}, s);
  const Eigen::VectorXd c = Eigen::VectorXd::Constant(s.num_nodes(), 1.7);
  const Eigen::VectorXd r = op.apply(consistent_mass(s) * c);
  EXPECT_LT((r - c).lpNorm<Eigen::Infinity>(), 1e-10);
  EXPECT_LT((op.apply_nodal(c) - c).lpNorm<Eigen::Infinity>(), 1e-12);
}

TEST(Smoother, NarrowKernelApproachesMassSolve) {
  const auto s = uniform_surface(16, 2.0);
  const double h = 0.125;
  const SmootherOperator op(NonlocalSmoother{h / 10.0, 1.0}, s);
  Eigen::VectorXd eta = Eigen::VectorXd::Zero(s.num_nodes());
  eta[7] = 1.0;
  const Eigen::VectorXd direct = consistent_mass(s).ldlt().solve(eta);
  const Eigen::VectorXd r = op.apply(eta);
  EXPECT_LE((r - direct).lpNorm<Eigen::Infinity>(),
            0.05 * direct.lpNorm<Eigen::Infinity>());
}

TEST(Smoother, WideKernelPreservesMassAndBounds) {
  const auto s = uniform_surface(16, 2.0);
  const double h = 0.125;
  const SmootherOperator op(NonlocalSmoother{5.0 * h, 1.0}, s);
  const Eigen::VectorXd& m = op.lumped_mass();
  std::mt19937_64 rng(3);
  std::normal_distribution<double> d;
  for (int trial = 0; trial < 20; ++trial) {
    Eigen::VectorXd eta(s.num_nodes());
    for (int i = 0; i < eta.size(); ++i) eta[i] = d(rng);
    const Eigen::VectorXd p = op.representative(eta);
    const Eigen::VectorXd r = op.apply(eta);
    EXPECT_NEAR(m.dot(r), m.dot(p), 1e-10 * (1 + std::abs(m.dot(p))));
    EXPECT_LE(r.lpNorm<Eigen::Infinity>(), p.lpNorm<Eigen::Infinity>() * (1 + 1e-12));
  }
  const Eigen::MatrixXd& S = op.kernel();
  EXPECT_LT((S - S.transpose()).norm(), 1e-14 * S.norm());
  EXPECT_GE(S.minCoeff(), 0.0);
}

TEST(Smoother, RejectsNonPositiveWidth) {
  EXPECT_THROW(SmootherOperator(NonlocalSmoother{0.0, 1.0}, uniform_surface(4, 1.0)),
               ConfigError);
}
