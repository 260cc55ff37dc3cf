// SPDX-License-Identifier: Apache-2.0
#pragma once

// Scalar maximal monotone maps and their Yosida machinery. Everything here is
// a pure function of its arguments and acts nodewise on discrete fields.

#include <cmath>
#include <limits>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "adhesim/errors.hpp"
#include "adhesim/numerics.hpp"

namespace adhesim {

enum class MonotoneKind { identity, logarithm, exponential };

inline std::string_view to_string(MonotoneKind k) {
  switch (k) {
    case MonotoneKind::identity: return "identity";
    case MonotoneKind::logarithm: return "logarithm";
    case MonotoneKind::exponential: return "exponential";
  }
  return "?";
}

/// A point on the graph of the resolvent: `r = R_eps(x)` together with
/// `value = L(r)`. For the logarithm the pair is carried in the chart
/// s = ln r, so `value` stays exact even when `r` underflows to zero.
struct ResolventPoint {
  double r = 0.0;
  double value = 0.0;
};

/// Single-valued C^1 increasing map L on an open interval D(L), normalized so
/// that its primitive J satisfies J(0) = 0.
///
///  - identity:    L(x) = x,    J(x) = x^2/2,        J*(w) = w^2/2
///  - logarithm:   L(x) = ln x, J(x) = x(ln x - 1),  J*(w) = e^w
///  - exponential: L(x) = e^x,  J(x) = e^x - 1,      J*(w) = w ln w - w + 1
///
/// The exponential only appears as the inverse of the logarithm when
/// building regularized initial data.
class MonotoneFunction {
 public:
  static constexpr double kResolventTol = 1e-12;
  static constexpr int kResolventMaxIter = 200;

  constexpr MonotoneFunction() = default;
  constexpr explicit MonotoneFunction(MonotoneKind kind) : kind_(kind) {}

  static constexpr MonotoneFunction identity() { return MonotoneFunction(MonotoneKind::identity); }
  static constexpr MonotoneFunction logarithm() {
    return MonotoneFunction(MonotoneKind::logarithm);
  }
  static constexpr MonotoneFunction exponential() {
    return MonotoneFunction(MonotoneKind::exponential);
  }

  constexpr MonotoneKind kind() const { return kind_; }

  double domain_lo() const {
    return kind_ == MonotoneKind::logarithm ? 0.0 : -std::numeric_limits<double>::infinity();
  }
  double domain_hi() const { return std::numeric_limits<double>::infinity(); }
  bool in_domain(double x) const { return x > domain_lo() && x < domain_hi(); }

  double eval(double x) const {
    switch (kind_) {
      case MonotoneKind::identity: return x;
      case MonotoneKind::logarithm: return x > 0.0 ? std::log(x) : nan();
      case MonotoneKind::exponential: return std::exp(x);
    }
    return nan();
  }

  double deriv(double x) const {
    switch (kind_) {
      case MonotoneKind::identity: return 1.0;
      case MonotoneKind::logarithm: return x > 0.0 ? 1.0 / x : nan();
      case MonotoneKind::exponential: return std::exp(x);
    }
    return nan();
  }

  /// J with J(0) = 0; for the logarithm J extends continuously to x = 0.
  double primitive(double x) const {
    switch (kind_) {
      case MonotoneKind::identity: return 0.5 * x * x;
      case MonotoneKind::logarithm:
        if (x == 0.0) return 0.0;
        return x > 0.0 ? x * (std::log(x) - 1.0) : nan();
      case MonotoneKind::exponential: return std::expm1(x);
    }
    return nan();
  }

  /// Fenchel conjugate J*; its derivative is the inverse of L.
  double conjugate(double w) const {
    switch (kind_) {
      case MonotoneKind::identity: return 0.5 * w * w;
      case MonotoneKind::logarithm: return std::exp(w);
      case MonotoneKind::exponential:
        if (w == 0.0) return 1.0;
        return w > 0.0 ? w * std::log(w) - w + 1.0 : std::numeric_limits<double>::infinity();
    }
    return nan();
  }

  /// L^{-1} as a monotone function in its own right.
  MonotoneFunction inverse() const {
    switch (kind_) {
      case MonotoneKind::identity: return identity();
      case MonotoneKind::logarithm: return exponential();
      case MonotoneKind::exponential: return logarithm();
    }
    return identity();
  }

  /// Solves r + eps L(r) = x by bracketed Newton with bisection fallback.
  ResolventPoint resolve(double x, double eps) const {
    if (!(eps > 0.0)) throw ConfigError("resolvent requires eps > 0");
    switch (kind_) {
      case MonotoneKind::identity: {
        auto f = [&](double r) { return r + eps * r - x; };
        auto df = [&](double) { return 1.0 + eps; };
        const auto res = numerics::solve_increasing(f, df, x, kResolventTol, kResolventMaxIter);
        check(res, x, eps);
        return {res.root, res.root};
      }
      case MonotoneKind::logarithm: {
        // Chart s = ln r: e^s + eps s = x.
        auto f = [&](double s) { return std::exp(s) + eps * s - x; };
        auto df = [&](double s) { return std::exp(s) + eps; };
        const double guess = x >= 1.0 ? std::log(x) : std::min(0.0, x / eps);
        const auto res =
            numerics::solve_increasing(f, df, guess, kResolventTol, kResolventMaxIter);
        check(res, x, eps);
        return {std::exp(res.root), res.root};
      }
      case MonotoneKind::exponential: {
        auto f = [&](double r) { return r + eps * std::exp(r) - x; };
        auto df = [&](double r) { return 1.0 + eps * std::exp(r); };
        const double guess = std::min(x, std::log1p(std::max(x, 0.0) / eps));
        const auto res =
            numerics::solve_increasing(f, df, guess, kResolventTol, kResolventMaxIter);
        check(res, x, eps);
        return {res.root, std::exp(res.root)};
      }
    }
    return {nan(), nan()};
  }

  double resolvent(double x, double eps) const { return resolve(x, eps).r; }

  /// Yosida regularization (x - R_eps(x))/eps, evaluated as L(R_eps(x)).
  double yosida(double x, double eps) const { return resolve(x, eps).value; }

  /// L'(r)/(1 + eps L'(r)) at a resolvent point.
  double yosida_deriv_at(const ResolventPoint& p, double eps) const {
    switch (kind_) {
      case MonotoneKind::identity: return 1.0 / (1.0 + eps);
      case MonotoneKind::logarithm: return 1.0 / (p.r + eps);
      case MonotoneKind::exponential: return p.value / (1.0 + eps * p.value);
    }
    return nan();
  }

  /// J(r) at a resolvent point.
  double primitive_at(const ResolventPoint& p) const {
    if (kind_ == MonotoneKind::logarithm) return p.r * (p.value - 1.0);
    return primitive(p.r);
  }

 private:
  static double nan() { return std::numeric_limits<double>::quiet_NaN(); }

  static void check(const numerics::RootResult& res, double x, double eps) {
    if (res.converged) return;
    std::ostringstream os;
    os << "resolvent did not converge for x=" << x << ", eps=" << eps << " (last bracket ["
       << res.lo << ", " << res.hi << "] after " << res.iterations << " iterations)";
    throw ResolventError(os.str(), x, eps, res.lo, res.hi);
  }

  MonotoneKind kind_ = MonotoneKind::identity;
};

/// Resolvent, Yosida map, Yosida primitive J_eps and its conjugate J*_eps for
/// a fixed eps.
class YosidaFamily {
 public:
  YosidaFamily(MonotoneFunction base, double eps) : base_(base), eps_(eps) {
    if (!(eps > 0.0)) throw ConfigError("Yosida family requires eps > 0");
  }

  const MonotoneFunction& base() const { return base_; }
  double eps() const { return eps_; }

  ResolventPoint resolve(double x) const { return base_.resolve(x, eps_); }
  double resolvent(double x) const { return resolve(x).r; }
  double yosida(double x) const { return resolve(x).value; }
  double yosida_deriv(double x) const { return base_.yosida_deriv_at(resolve(x), eps_); }

  /// J_eps(x) = eps/2 |L_eps(x)|^2 + J(R_eps(x)).
  double primitive(double x) const {
    const auto p = resolve(x);
    return 0.5 * eps_ * p.value * p.value + base_.primitive_at(p);
  }

  /// J*_eps(w) = J*(w) + eps/2 w^2.
  double conjugate(double w) const { return base_.conjugate(w) + 0.5 * eps_ * w * w; }

 private:
  MonotoneFunction base_;
  double eps_;
};

/// Which derived function `RegularizedEntropy::evaluate` returns.
enum class EntropyQuantity { tilde, tilde_deriv, flux, big_i, big_h };

/// The regularized entropy map x -> eps x + L_eps(x) and the integral
/// functions built on it. The surface variant additionally carries the flux
/// f_eps = int_0^x 1/tilde' and H_eps = int_0^x tilde' f_eps.
class RegularizedEntropy {
 public:
  static constexpr double kQuadratureRelTol = 1e-9;

  RegularizedEntropy(MonotoneFunction base, double eps, bool surface)
      : family_(base, eps), surface_(surface) {}

  static RegularizedEntropy bulk(MonotoneFunction base, double eps) { return {base, eps, false}; }
  static RegularizedEntropy surface(MonotoneFunction base, double eps) {
    return {base, eps, true};
  }

  const YosidaFamily& family() const { return family_; }
  double eps() const { return family_.eps(); }
  bool is_surface() const { return surface_; }

  double tilde(double x) const { return eps() * x + family_.yosida(x); }
  double tilde_deriv(double x) const { return eps() + family_.yosida_deriv(x); }

  /// tilde and tilde' from one resolvent solve.
  std::pair<double, double> tilde_with_deriv(double x) const {
    const auto p = family_.resolve(x);
    return {eps() * x + p.value, eps() + family_.base().yosida_deriv_at(p, eps())};
  }

  double flux_deriv(double x) const { return 1.0 / tilde_deriv(x); }

  double flux(double x) const {
    require_surface("flux");
    return numerics::integrate([this](double s) { return 1.0 / tilde_deriv(s); }, 0.0, x,
                               kQuadratureRelTol);
  }

  /// int_0^x s tilde'(s) ds.
  double big_i(double x) const {
    return numerics::integrate([this](double s) { return s * tilde_deriv(s); }, 0.0, x,
                               kQuadratureRelTol);
  }

  /// Closed form eps/2 x^2 + J*_eps(L_eps(x)) + J_eps(0) of `big_i`.
  double big_i_closed_form(double x) const {
    return 0.5 * eps() * x * x + family_.conjugate(family_.yosida(x)) + family_.primitive(0.0);
  }

  double big_h(double x) const {
    require_surface("H");
    return numerics::integrate([this](double s) { return tilde_deriv(s) * flux(s); }, 0.0, x,
                               kQuadratureRelTol);
  }

  double evaluate(EntropyQuantity which, double x) const {
    switch (which) {
      case EntropyQuantity::tilde: return tilde(x);
      case EntropyQuantity::tilde_deriv: return tilde_deriv(x);
      case EntropyQuantity::flux: return flux(x);
      case EntropyQuantity::big_i: return big_i(x);
      case EntropyQuantity::big_h: return big_h(x);
    }
    return std::numeric_limits<double>::quiet_NaN();
  }

 private:
  void require_surface(const char* what) const {
    if (!surface_)
      throw ConfigError(std::string(what) + " is only defined for the surface entropy");
  }

  YosidaFamily family_;
  bool surface_;
};

/// Regularized bulk initial temperature: with w0 = L(theta0), gamma = L^{-1}
/// and rho_eps the resolvent of gamma, returns gamma_eps(w0) + eps rho_eps(w0)
/// nodewise. Then L_eps(result) = rho_eps(w0).
inline std::vector<double> approx_bulk_init(std::span<const double> theta0, MonotoneFunction L,
                                            double eps) {
  const MonotoneFunction gamma = L.inverse();
  std::vector<double> out(theta0.size());
  for (std::size_t i = 0; i < theta0.size(); ++i) {
    if (!L.in_domain(theta0[i])) {
      std::ostringstream os;
      os << "initial temperature at node " << i << " (" << theta0[i]
         << ") lies outside the domain of the " << to_string(L.kind()) << " entropy";
      throw ConfigError(os.str());
    }
    const double w0 = L.eval(theta0[i]);
    const auto p = gamma.resolve(w0, eps);
    out[i] = p.value + eps * p.r;
  }
  return out;
}

/// Regularized surface data for the logarithmic surface entropy:
/// max(theta_s0, eps^alpha) nodewise.
inline std::vector<double> approx_surf_init_log(std::span<const double> theta_s0, double alpha,
                                                double eps) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw ConfigError("surface data exponent alpha must lie in (0,1), got " +
                      std::to_string(alpha));
  if (!(eps > 0.0)) throw ConfigError("surface data construction requires eps > 0");
  const double floor = std::pow(eps, alpha);
  std::vector<double> out(theta_s0.size());
  for (std::size_t i = 0; i < theta_s0.size(); ++i) out[i] = std::max(theta_s0[i], floor);
  return out;
}

/// Surface data for an arbitrary surface entropy: the lifting above for the
/// logarithm, the datum itself otherwise.
inline std::vector<double> approx_surf_init(std::span<const double> theta_s0, MonotoneFunction ell,
                                            double alpha, double eps) {
  if (ell.kind() == MonotoneKind::logarithm) return approx_surf_init_log(theta_s0, alpha, eps);
  return {theta_s0.begin(), theta_s0.end()};
}

}  // namespace adhesim
