// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "adhesim/monotone.hpp"
#include "support.hpp"

using namespace adhesim;
namespace at = adhesim::testing;

namespace {

const MonotoneFunction kLn = MonotoneFunction::logarithm();
const MonotoneFunction kId = MonotoneFunction::identity();

}  // namespace

TEST(Resolvent, IdentityClosedForm) { EXPECT_NEAR(kId.resolvent(1.0, 1.0), 0.5, 1e-14); }

TEST(Resolvent, LogFixedPointAtOne) {
  for (double eps : {0.3, 1e-3, 7.0}) EXPECT_NEAR(kLn.resolvent(1.0, eps), 1.0, 1e-12);
}

TEST(Resolvent, LogAtZeroMatchesBisection) {
  const double r_ref =
      at::bisect([](double r) { return r + 0.1 * std::log(r); }, 1e-300, 1.0, 1e-15);
  EXPECT_NEAR(kLn.resolvent(0.0, 0.1), r_ref, 1e-12);
}

TEST(Resolvent, ExponentialMatchesBisection) {
  const MonotoneFunction ex = MonotoneFunction::exponential();
  for (double x : {-3.0, 0.0, 0.7, 5.0}) {
    auto f = [&](double r) { return r + 0.2 * std::exp(r) - x; };
    auto [lo, hi] = at::bracket(f, 0.0);
    EXPECT_NEAR(ex.resolvent(x, 0.2), at::bisect(f, lo, hi, 1e-14), 1e-11) << x;
  }
}

TEST(Resolvent, NonPositiveEpsRejected) {
  EXPECT_THROW(kLn.resolvent(1.0, 0.0), ConfigError);
}

TEST(Yosida, Examples) {
  EXPECT_NEAR(kId.yosida(1.0, 1.0), 0.5, 1e-14);
  EXPECT_NEAR(kLn.yosida(1.0, 0.5), 0.0, 1e-12);
  const double s = at::log_resolvent_chart(-2.0, 0.1);
  const double r = std::exp(s);
  EXPECT_NEAR(kLn.yosida(-2.0, 0.1), (-2.0 - r) / 0.1, 1e-10);
}

TEST(Yosida, DefinitionMatchesLOfResolvent) {
  for (double eps : {1.0, 0.1, 0.01}) {
    for (double x : at::linspace(-4.0, 6.0, 101)) {
      const auto p = kLn.resolve(x, eps);
      EXPECT_NEAR((x - p.r) / eps, p.value, 1e-9 / eps) << x << " " << eps;
      if (p.r > 1e-200) {
        EXPECT_NEAR(std::log(p.r), p.value, 1e-9);
      }
    }
  }
}

TEST(MonotoneFunction, StructuralInvariants) {
  for (auto mf : {kLn, kId}) {
    const double lo = mf.kind() == MonotoneKind::logarithm ? 1e-3 : -5.0;
    const auto xs = at::linspace(lo, 8.0, 500);
    for (double x : xs) {
      EXPECT_GT(mf.deriv(x), 0.0);
      EXPECT_NEAR(mf.primitive(x) + mf.conjugate(mf.eval(x)), x * mf.eval(x),
                  1e-10 * std::max(1.0, std::abs(x * mf.eval(x))));
    }
    EXPECT_EQ(mf.primitive(0.0), 0.0);
    const double lip = at::lipschitz_estimate([&](double x) { return 1.0 / mf.deriv(x); }, xs);
    EXPECT_LE(lip, 1.0 + 1e-9);
  }
}

TEST(MonotoneFunction, InverseRoundTrip) {
  const MonotoneFunction ex = kLn.inverse();
  EXPECT_EQ(ex.kind(), MonotoneKind::exponential);
  for (double x : {0.1, 1.0, 3.5}) EXPECT_NEAR(ex.eval(kLn.eval(x)), x, 1e-14);
  // The conjugate of J is the primitive of the inverse up to a constant.
  for (double w : {-2.0, 0.0, 1.5})
    EXPECT_NEAR(kLn.conjugate(w) - kLn.conjugate(0.0), ex.primitive(w), 1e-13);
}

class YosidaIdentities : public ::testing::TestWithParam<std::tuple<MonotoneKind, double>> {};

TEST_P(YosidaIdentities, HoldAtSamples) {
  const auto [kind, eps] = GetParam();
  const MonotoneFunction mf(kind);
  const YosidaFamily fam(mf, eps);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> ux(-4.0, 6.0);
  for (int k = 0; k < 1000; ++k) {
    const double x = ux(rng), y = ux(rng);
    const auto p = fam.resolve(x);
    EXPECT_LE(std::abs(p.r - fam.resolvent(y)), std::abs(x - y) + 1e-12);
    const double je = fam.primitive(x);
    EXPECT_NEAR(je, 0.5 * eps * p.value * p.value + mf.primitive_at(p), 1e-10 * (1 + std::abs(je)));
    EXPECT_NEAR(je + fam.conjugate(p.value), x * p.value, 1e-10 * (1 + std::abs(x * p.value)));
    const double w = ux(rng) * 0.5;
    EXPECT_NEAR(fam.conjugate(w), mf.conjugate(w) + 0.5 * eps * w * w,
                1e-10 * (1 + std::abs(fam.conjugate(w))));
  }
}

TEST_P(YosidaIdentities, MoreauEnvelopeOracle) {
  const auto [kind, eps] = GetParam();
  const MonotoneFunction mf(kind);
  const YosidaFamily fam(mf, eps);
  // J_eps(x) = min_r J(r) + (x - r)^2/(2 eps), evaluated by golden section.
  for (double x : {-1.5, 0.0, 0.4, 2.0, 4.0}) {
    auto obj = [&](double r) {
      return mf.primitive(r) + (x - r) * (x - r) / (2.0 * eps);
    };
    const double lo = kind == MonotoneKind::logarithm ? 0.0 : -10.0;
    const double ref = at::golden_min(obj, lo, 10.0, 1e-13);
    EXPECT_NEAR(fam.primitive(x), ref, 1e-9 * (1 + std::abs(ref))) << x;
  }
}

INSTANTIATE_TEST_SUITE_P(
    Grid, YosidaIdentities,
    ::testing::Combine(::testing::Values(MonotoneKind::logarithm, MonotoneKind::identity),
                       ::testing::Values(1.0, 0.1, 0.01)));

TEST(Yosida, GraphConvergence) {
  double prev = std::numeric_limits<double>::infinity();
  for (double eps : {0.1, 0.05, 0.025}) {
    const double d = std::abs(kLn.yosida(1.5, eps) - std::log(1.5));
    EXPECT_LE(d, prev);
    prev = d;
  }
  EXPECT_LT(std::abs(kLn.yosida(1.5, 1e-4) - std::log(1.5)), 1e-3);
}

TEST(RegularizedEntropy, Examples) {
  const auto id = RegularizedEntropy::surface(kId, 0.1);
  EXPECT_NEAR(id.flux(2.0), 2.0 / (0.1 + 1.0 / 1.1), 1e-9);
  for (double eps : {0.5, 0.1, 0.01})
    EXPECT_LE(RegularizedEntropy::surface(kLn, eps).big_h(3.0), 4.5);
  EXPECT_EQ(RegularizedEntropy::bulk(kLn, 0.1).big_i(0.0), 0.0);
  EXPECT_EQ(RegularizedEntropy::surface(kId, 0.1).big_i(0.0), 0.0);
}

TEST(RegularizedEntropy, SurfaceOnlyQuantities) {
  const auto bulk = RegularizedEntropy::bulk(kLn, 0.1);
  EXPECT_THROW(bulk.evaluate(EntropyQuantity::flux, 1.0), ConfigError);
  EXPECT_THROW(bulk.evaluate(EntropyQuantity::big_h, 1.0), ConfigError);
  EXPECT_NO_THROW(bulk.evaluate(EntropyQuantity::big_i, 1.0));
}

TEST(RegularizedEntropy, EvaluateDispatch) {
  const auto re = RegularizedEntropy::surface(kLn, 0.1);
  EXPECT_EQ(re.evaluate(EntropyQuantity::tilde, 0.7), re.tilde(0.7));
  EXPECT_EQ(re.evaluate(EntropyQuantity::tilde_deriv, 0.7), re.tilde_deriv(0.7));
  EXPECT_EQ(re.evaluate(EntropyQuantity::flux, 0.7), re.flux(0.7));
}

TEST(RegularizedEntropy, TildeDerivMatchesFiniteDifference) {
  for (double eps : {1.0, 0.1, 0.01}) {
    const auto re = RegularizedEntropy::bulk(kLn, eps);
    for (double x : {-3.0, -0.2, 0.05, 1.0, 4.0}) {
      const double h = 1e-6;
      const double fd = (re.tilde(x + h) - re.tilde(x - h)) / (2 * h);
      EXPECT_NEAR(re.tilde_deriv(x), fd, 1e-5 * std::max(1.0, fd)) << x << " " << eps;
    }
  }
}

TEST(RegularizedEntropy, BiLipschitzBounds) {
  for (auto mf : {kLn, kId}) {
    for (double eps : {1.0, 0.1, 0.01}) {
      const auto re = RegularizedEntropy::bulk(mf, eps);
      for (double x : at::linspace(-6.0, 10.0, 1601)) {
        const double d = re.tilde_deriv(x);
        EXPECT_GT(d, eps);
        EXPECT_LE(d, eps + 2.0 / eps);
      }
    }
  }
}

TEST(RegularizedEntropy, BigIClosedForm) {
  for (auto mf : {kLn, kId}) {
    for (double eps : {1.0, 0.1, 0.01}) {
      const auto re = RegularizedEntropy::bulk(mf, eps);
      for (double x : at::linspace(-3.95, 5.95, 41))
        EXPECT_LT(at::rel_err(re.big_i(x), re.big_i_closed_form(x)), 1e-8) << x << " " << eps;
    }
  }
}

TEST(RegularizedEntropy, FluxConvergesLinearlyInEps) {
  // For the logarithm f(x) = x^2/2 and the error is first order in eps.
  for (double x : {0.5, 1.0, 2.0, 3.0}) {
    double prev = -1.0;
    for (double eps : {0.04, 0.02, 0.01, 0.005}) {
      const double err = std::abs(RegularizedEntropy::surface(kLn, eps).flux(x) - 0.5 * x * x);
      if (prev > 0.0) {
        EXPECT_GE(prev / err, 2.0 / 1.5) << x << " " << eps;
        EXPECT_LE(prev / err, 2.0 * 1.5) << x << " " << eps;
      }
      prev = err;
    }
  }
}

TEST(RegularizedEntropy, HBoundForLogOnPositiveAxis) {
  for (double eps : {0.5, 0.1, 0.01}) {
    const auto re = RegularizedEntropy::surface(kLn, eps);
    for (double x : at::linspace(0.0, 6.0, 25)) EXPECT_LE(re.big_h(x), 0.5 * x * x + 1e-12);
  }
}

TEST(RegularizedEntropy, HMinimumAtZero) {
  for (auto mf : {kLn, kId}) {
    const auto re = RegularizedEntropy::surface(mf, 0.1);
    double prev = 0.0;
    for (double x : at::linspace(0.0, 4.0, 9)) {
      const double h = re.big_h(x);
      EXPECT_GE(h, prev);
      prev = h;
    }
    prev = 0.0;
    for (double x : at::linspace(0.0, -4.0, 9)) {
      const double h = re.big_h(x);
      EXPECT_GE(h, prev);
      prev = h;
    }
  }
}

TEST(BulkInit, LogConstantOne) {
  const std::vector<double> theta0(5, 1.0);
  double prev_gap = std::numeric_limits<double>::infinity();
  for (double eps : {0.1, 0.05, 0.025, 0.0125}) {
    // rho solves rho + eps e^rho = ln 1 = 0; it is negative, not zero.
    const double rho = at::bisect([&](double r) { return r + eps * std::exp(r); }, -1.0, 0.0);
    EXPECT_LT(rho, 0.0);
    const double gamma_eps = (0.0 - rho) / eps;
    const double expected = gamma_eps + eps * rho;
    const auto out = approx_bulk_init(theta0, kLn, eps);
    for (double v : out) EXPECT_NEAR(v, expected, 1e-11);
    const double gap = std::abs(out[0] - 1.0);
    EXPECT_LT(gap, prev_gap);
    prev_gap = gap;
  }
}

TEST(BulkInit, IdentityIsExact) {
  const std::vector<double> theta0(4, 5.0);
  // gamma = id: rho = w/(1+eps), gamma_eps = w/(1+eps), sum = w.
  for (double v : approx_bulk_init(theta0, kId, 0.2)) EXPECT_NEAR(v, 5.0, 1e-12);
}

TEST(BulkInit, L1ErrorDecreases) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double a = u(rng), b = u(rng), c = u(rng);
  std::vector<double> theta0;
  for (double x : at::linspace(0.0, 1.0, 200))
    theta0.push_back(0.6 + a * std::sin(3.0 * x + b) * 0.5 + c * x * x);
  double prev = std::numeric_limits<double>::infinity();
  for (double eps : {0.1, 0.05, 0.025}) {
    const auto out = approx_bulk_init(theta0, kLn, eps);
    double l1 = 0.0;
    for (std::size_t i = 0; i < out.size(); ++i) l1 += std::abs(out[i] - theta0[i]);
    EXPECT_LT(l1, prev);
    prev = l1;
  }
}

TEST(BulkInit, YosidaBoundedByData) {
  std::vector<double> theta0 = {0.01, 0.3, 1.0, 4.0, 50.0};
  for (double eps : {0.5, 0.1, 0.01}) {
    const auto out = approx_bulk_init(theta0, kLn, eps);
    for (std::size_t i = 0; i < out.size(); ++i)
      EXPECT_LE(std::abs(kLn.yosida(out[i], eps)), 1.0 + std::abs(std::log(theta0[i])));
  }
}

TEST(BulkInit, OutsideDomainNamesNode) {
  const std::vector<double> theta0 = {1.0, 2.0, -0.5};
  try {
    approx_bulk_init(theta0, kLn, 0.1);
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("node 2"), std::string::npos);
  }
}

TEST(SurfaceInit, Examples) {
  for (double v : approx_surf_init_log(std::vector<double>(3, 2.0), 0.5, 0.01))
    EXPECT_DOUBLE_EQ(v, 2.0);
  const auto out = approx_surf_init_log(std::vector<double>{1.0, 1e-6, 3.0}, 0.5, 0.01);
  EXPECT_DOUBLE_EQ(out[1], 0.1);
  EXPECT_DOUBLE_EQ(out[0], 1.0);
  EXPECT_THROW(approx_surf_init_log(std::vector<double>{1.0}, 1.0, 0.01), ConfigError);
  EXPECT_THROW(approx_surf_init_log(std::vector<double>{1.0}, 0.0, 0.01), ConfigError);
  for (double v : approx_surf_init_log(std::vector<double>{0.0, -1.0}, 0.5, 0.04))
    EXPECT_GT(v, 0.0);
}

TEST(SurfaceInit, IdentityLeavesDataAlone) {
  const std::vector<double> d = {-1.0, 0.0, 2.0};
  EXPECT_EQ(approx_surf_init(d, kId, 0.5, 0.1), d);
}
