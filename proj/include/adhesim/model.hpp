// SPDX-License-Identifier: Apache-2.0
#pragma once

// Material laws, structural checks on them, loads and the discrete state.

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "adhesim/errors.hpp"
#include "adhesim/mesh.hpp"
#include "adhesim/monotone.hpp"

namespace adhesim {

using ScalarFn = std::function<double(double)>;

/// Plane-strain stiffness in Voigt form acting on (e11, e22, 2 e12).
struct ElasticTensor {
  Eigen::Matrix3d voigt = Eigen::Matrix3d::Identity();

  static ElasticTensor isotropic(double lambda, double mu) {
    ElasticTensor t;
    t.voigt << lambda + 2.0 * mu, lambda, 0.0, lambda, lambda + 2.0 * mu, 0.0, 0.0, 0.0, mu;
    return t;
  }
  double min_eigenvalue() const {
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(voigt);
    return es.eigenvalues().minCoeff();
  }
  bool positive_definite() const {
    return voigt.isApprox(voigt.transpose()) && min_eigenvalue() > 0.0;
  }
};

enum class EntropyPair { ln_ln, id_id, ln_id };

inline std::string_view to_string(EntropyPair p) {
  switch (p) {
    case EntropyPair::ln_ln: return "ln-ln";
    case EntropyPair::id_id: return "id-id";
    case EntropyPair::ln_id: return "ln-id";
  }
  return "?";
}

struct MaterialModel {
  MonotoneFunction bulk_entropy = MonotoneFunction::logarithm();
  MonotoneFunction surface_entropy = MonotoneFunction::logarithm();

  ScalarFn g, g_prime;
  ScalarFn k;
  ScalarFn friction_coef, friction_coef_prime;
  ScalarFn lambda, lambda_prime, lambda_second;
  ScalarFn gamma, gamma_prime;
  double theta_eq = 0.0;
  ElasticTensor Ke = ElasticTensor::isotropic(1.0, 1.0);
  ElasticTensor Kv = ElasticTensor::isotropic(0.5, 0.5);

  double c3 = 1.0, c4 = 1.0;
  double c5 = 1.0, c5_prime = 0.2;
  double c7 = 0.3, c8 = 0.0;
  /// Range exponent of the smoother; carried as metadata only.
  double nu = 1.0;

  /// Coefficients of the builtin law family.
  struct Coefficients {
    double g1 = 1.0;
    double k0 = 0.5;
    double c_base = 1.0, c_slope = 0.2;
    double lambda1 = 0.3;
    double gamma1 = 0.1;
    double theta_eq = 0.0;
    double ke_lambda = 1.0, ke_mu = 1.0;
    double kv_lambda = 0.5, kv_mu = 0.5;
  };

  static MaterialModel from_coefficients(EntropyPair pair, const Coefficients& c) {
    MaterialModel m;
    switch (pair) {
      case EntropyPair::ln_ln:
        m.bulk_entropy = MonotoneFunction::logarithm();
        m.surface_entropy = MonotoneFunction::logarithm();
        break;
      case EntropyPair::id_id:
        m.bulk_entropy = MonotoneFunction::identity();
        m.surface_entropy = MonotoneFunction::identity();
        break;
      case EntropyPair::ln_id:
        m.bulk_entropy = MonotoneFunction::logarithm();
        m.surface_entropy = MonotoneFunction::identity();
        break;
    }
    const double g1 = c.g1;
    m.g = [g1](double x) { return g1 * x; };
    m.g_prime = [g1](double) { return g1; };
    m.c3 = m.c4 = g1;
    const double k0 = c.k0;
    m.k = [k0](double) { return k0; };
    const double cb = c.c_base, cs = c.c_slope;
    // ln cosh written to stay finite for large arguments.
    m.friction_coef = [cb, cs](double x) {
      const double a = std::abs(x);
      return cb + cs * (a + std::log1p(std::exp(-2.0 * a)) - std::log(2.0));
    };
    m.friction_coef_prime = [cs](double x) { return cs * std::tanh(x); };
    m.c5 = cb;
    m.c5_prime = std::abs(cs);
    const double l1 = c.lambda1;
    m.lambda = [l1](double x) { return l1 * x; };
    m.lambda_prime = [l1](double) { return l1; };
    m.lambda_second = [](double) { return 0.0; };
    m.c7 = std::abs(l1);
    m.c8 = 0.0;
    const double ga = c.gamma1;
    m.gamma = [ga](double x) { return 0.5 * ga * x * x; };
    m.gamma_prime = [ga](double x) { return ga * x; };
    m.theta_eq = c.theta_eq;
    m.Ke = ElasticTensor::isotropic(c.ke_lambda, c.ke_mu);
    m.Kv = ElasticTensor::isotropic(c.kv_lambda, c.kv_mu);
    return m;
  }

  static MaterialModel defaults(EntropyPair pair = EntropyPair::ln_ln) {
    return from_coefficients(pair, Coefficients{});
  }
};

/// One checked structural condition.
struct HypothesisCheck {
  std::string hypothesis;  ///< stable identifier, e.g. "conduction"
  std::string condition;
  bool pass = true;
  double sample = 0.0;  ///< first violating sample, when !pass
  double value = 0.0;   ///< offending value at that sample
};

struct ValidationReport {
  std::vector<HypothesisCheck> checks;
  bool ok() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
  const HypothesisCheck* first_failure() const {
    for (const auto& c : checks)
      if (!c.pass) return &c;
    return nullptr;
  }
  std::string summary() const {
    std::ostringstream os;
    for (const auto& c : checks) {
      os << (c.pass ? "pass " : "FAIL ") << c.hypothesis << ": " << c.condition;
      if (!c.pass) os << " (violated at x=" << c.sample << ", value " << c.value << ")";
      os << '\n';
    }
    return os.str();
  }
};

inline std::vector<double> default_validation_grid() {
  std::vector<double> g;
  for (int i = 0; i <= 400; ++i) g.push_back(-10.0 + 20.0 * i / 400.0);
  return g;
}

namespace detail {

inline void check_all(ValidationReport& rep, std::string hyp, std::string cond,
                      const std::vector<double>& grid, const std::function<double(double)>& value,
                      const std::function<bool(double, double)>& ok) {
  HypothesisCheck c{std::move(hyp), std::move(cond)};
  for (double x : grid) {
    const double v = value(x);
    if (!std::isfinite(v) || !ok(x, v)) {
      c.pass = false;
      c.sample = x;
      c.value = v;
      break;
    }
  }
  rep.checks.push_back(std::move(c));
}

// Lipschitz check by difference quotients on the sorted grid; the bound is
// generous because only finiteness of the constant is claimed.
inline void check_lipschitz(ValidationReport& rep, std::string hyp, std::string cond,
                            const std::vector<double>& grid, const ScalarFn& f,
                            double bound = 1e6) {
  HypothesisCheck c{std::move(hyp), std::move(cond)};
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const double q = std::abs(f(grid[i]) - f(grid[i - 1])) / (grid[i] - grid[i - 1]);
    if (!std::isfinite(q) || q > bound) {
      c.pass = false;
      c.sample = grid[i];
      c.value = q;
      break;
    }
  }
  rep.checks.push_back(std::move(c));
}

inline void check_entropy(ValidationReport& rep, const std::string& hyp,
                          const MonotoneFunction& mf) {
  std::vector<double> pts;
  const double lo = mf.kind() == MonotoneKind::logarithm ? 1e-3 : -10.0;
  for (int i = 0; i <= 400; ++i) pts.push_back(lo + (10.0 - lo) * i / 400.0);
  check_all(rep, hyp, "L' > 0", pts, [&](double x) { return mf.deriv(x); },
            [](double, double v) { return v > 0.0; });
  check_lipschitz(rep, hyp, "1/L' Lipschitz", pts, [&](double x) { return 1.0 / mf.deriv(x); });
  check_all(rep, hyp, "J(x) + J*(L(x)) = x L(x)", pts,
            [&](double x) {
              return mf.primitive(x) + mf.conjugate(mf.eval(x)) - x * mf.eval(x);
            },
            [](double x, double v) { return std::abs(v) <= 1e-10 * (1.0 + std::abs(x)); });
}

}  // namespace detail

/// Samples every structural condition on the grid and returns the report.
inline ValidationReport check_hypotheses(const MaterialModel& m,
                                         const std::vector<double>& grid) {
  ValidationReport rep;
  detail::check_entropy(rep, "bulk-entropy", m.bulk_entropy);
  detail::check_entropy(rep, "surface-entropy", m.surface_entropy);
  detail::check_all(rep, "conduction", "c3 <= g'(x) <= c4", grid, m.g_prime,
                    [&](double, double v) { return v >= m.c3 && v <= m.c4 && m.c3 > 0.0; });
  detail::check_all(rep, "coupling", "k(x) >= 0", grid, m.k,
                    [](double, double v) { return v >= 0.0; });
  detail::check_lipschitz(rep, "coupling", "k Lipschitz", grid, m.k);
  detail::check_all(rep, "coupling", "friction coefficient >= c5", grid, m.friction_coef,
                    [&](double, double v) { return v >= m.c5 && m.c5 > 0.0; });
  detail::check_all(rep, "coupling", "|friction coefficient'| <= c5'", grid,
                    m.friction_coef_prime,
                    [&](double, double v) { return std::abs(v) <= m.c5_prime; });
  detail::check_all(rep, "coupling", "friction coefficient'(x) x >= 0", grid,
                    [&](double x) { return m.friction_coef_prime(x) * x; },
                    [](double, double v) { return v >= 0.0; });
  detail::check_all(rep, "latent-heat", "|lambda'| <= c7", grid, m.lambda_prime,
                    [&](double, double v) { return std::abs(v) <= m.c7; });
  detail::check_all(rep, "latent-heat", "|lambda''| <= c8", grid, m.lambda_second,
                    [&](double, double v) { return std::abs(v) <= m.c8; });
  detail::check_lipschitz(rep, "adhesion-potential", "gamma' Lipschitz", grid, m.gamma_prime);
  HypothesisCheck ke{"elasticity", "Ke symmetric positive definite"};
  ke.pass = m.Ke.positive_definite();
  ke.value = m.Ke.min_eigenvalue();
  rep.checks.push_back(ke);
  HypothesisCheck kv{"elasticity", "Kv symmetric positive definite"};
  kv.pass = m.Kv.positive_definite();
  kv.value = m.Kv.min_eigenvalue();
  rep.checks.push_back(kv);
  return rep;
}

/// Throws ValidationError naming the first violated hypothesis.
inline ValidationReport validate(const MaterialModel& m,
                                 const std::vector<double>& grid = default_validation_grid()) {
  auto rep = check_hypotheses(m, grid);
  if (const auto* f = rep.first_failure()) {
    std::ostringstream os;
    os << "material law violates hypothesis '" << f->hypothesis << "': " << f->condition
       << " fails at x=" << f->sample << " (value " << f->value << ")";
    throw ValidationError(os.str());
  }
  return rep;
}

/// Spatial expression c + rx x + ry y + a exp(-|p - p0|^2 / (2 w^2)).
struct FieldExpr {
  double constant = 0.0;
  double ramp_x = 0.0, ramp_y = 0.0;
  double gauss_amp = 0.0, gauss_x = 0.0, gauss_y = 0.0, gauss_width = 1.0;

  static FieldExpr uniform(double c) {
    FieldExpr e;
    e.constant = c;
    return e;
  }
  double operator()(double x, double y) const {
    double v = constant + ramp_x * x + ramp_y * y;
    if (gauss_amp != 0.0) {
      const double d2 = (x - gauss_x) * (x - gauss_x) + (y - gauss_y) * (y - gauss_y);
      v += gauss_amp * std::exp(-d2 / (2.0 * gauss_width * gauss_width));
    }
    return v;
  }
};

enum class TimeProfile { constant, ramp, bump };

/// constant: 1; ramp: min(t/T, 1); bump: sin^2(pi t/T) on [0,T], 0 after.
struct TimeLaw {
  TimeProfile kind = TimeProfile::constant;
  double period = 1.0;

  double operator()(double t) const {
    switch (kind) {
      case TimeProfile::constant: return 1.0;
      case TimeProfile::ramp: return std::min(std::max(t / period, 0.0), 1.0);
      case TimeProfile::bump: {
        if (t < 0.0 || t > period) return 0.0;
        const double s = std::sin(M_PI * t / period);
        return s * s;
      }
    }
    return 0.0;
  }
};

/// Separable loads: heat source h, body force f and traction on the free
/// sides, each a spatial profile times a time profile.
struct Loads {
  FieldExpr heat{};
  TimeLaw heat_time{};
  std::array<double, 2> body_force{0.0, 0.0};
  FieldExpr body_profile = FieldExpr::uniform(1.0);
  TimeLaw body_time{};
  std::array<double, 2> traction{0.0, 0.0};
  TimeLaw traction_time{};

  bool is_zero() const {
    return heat.constant == 0.0 && heat.ramp_x == 0.0 && heat.ramp_y == 0.0 &&
           heat.gauss_amp == 0.0 && body_force[0] == 0.0 && body_force[1] == 0.0 &&
           traction[0] == 0.0 && traction[1] == 0.0;
  }
};

using SurfaceVectors = Eigen::Matrix<double, Eigen::Dynamic, 2>;

/// Discrete fields at one time level. `u` stores (ux, uy) interleaved per
/// bulk node. Surface vectors are one row per surface node.
struct State {
  double time = 0.0;
  Eigen::VectorXd theta, theta_s, chi, u;
  SurfaceVectors eta, mu, z;
  Eigen::VectorXd xi, zeta;

  int num_bulk() const { return static_cast<int>(theta.size()); }
  int num_surface() const { return static_cast<int>(theta_s.size()); }
  std::array<double, 2> displacement(int node) const { return {u[2 * node], u[2 * node + 1]}; }
};

}  // namespace adhesim
