// SPDX-License-Identifier: Apache-2.0
#pragma once

// Independent reference computations and constant-fitting helpers shared by
// the unit tests and the acceptance driver.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

namespace adhesim::testing {

// Plain bisection for an increasing f with f(lo) < 0 < f(hi).
inline double bisect(const std::function<double(double)>& f, double lo, double hi,
                     double tol = 1e-13) {
  for (int k = 0; k < 400 && hi - lo > tol; ++k) {
    const double m = 0.5 * (lo + hi);
    if (f(m) < 0.0)
      lo = m;
    else
      hi = m;
  }
  return 0.5 * (lo + hi);
}

// Grow [lo, hi] until it brackets the root of an increasing f.
inline std::pair<double, double> bracket(const std::function<double(double)>& f, double c) {
  double lo = c - 1.0, hi = c + 1.0;
  while (f(lo) > 0.0) lo = c - 2.0 * (c - lo);
  while (f(hi) < 0.0) hi = c + 2.0 * (hi - c);
  return {lo, hi};
}

// Resolvent of ln by bisection in the variable s = ln r; returns s.
inline double log_resolvent_chart(double x, double eps) {
  auto f = [&](double s) { return std::exp(s) + eps * s - x; };
  auto [lo, hi] = bracket(f, 0.0);
  return bisect(f, lo, hi, 1e-14);
}

// Composite Gauss-Legendre (5 point) on n panels.
inline double gauss_legendre(const std::function<double(double)>& f, double a, double b,
                             int n = 400) {
  static const double xg[5] = {0.0, -0.5384693101056831, 0.5384693101056831,
                               -0.9061798459386640, 0.9061798459386640};
  static const double wg[5] = {0.5688888888888889, 0.4786286704993665, 0.4786286704993665,
                               0.2369268850561891, 0.2369268850561891};
  const double h = (b - a) / n;
  double s = 0.0;
  for (int i = 0; i < n; ++i) {
    const double c = a + (i + 0.5) * h;
    for (int q = 0; q < 5; ++q) s += wg[q] * f(c + 0.5 * h * xg[q]);
  }
  return 0.5 * h * s;
}

// Golden-section minimum of a unimodal function on [a, b].
inline double golden_min(const std::function<double(double)>& f, double a, double b,
                         double tol = 1e-12) {
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - g * (b - a), d = a + g * (b - a);
  double fc = f(c), fd = f(d);
  for (int k = 0; k < 500 && b - a > tol; ++k) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - g * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + g * (b - a);
      fd = f(d);
    }
  }
  return f(0.5 * (a + b));
}

inline std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = a + (b - a) * i / (n - 1);
  return v;
}

inline double rel_err(double a, double b) {
  const double s = std::max({std::abs(a), std::abs(b), 1e-300});
  return std::abs(a - b) / s;
}

// Fitted constants are inflated by this factor before being re-checked at
// other eps; a raw supremum at one eps is only a lower bound for the constant.
inline constexpr double kFitSafety = 1.5;

// Largest difference quotient of g on the sorted grid xs.
inline double lipschitz_estimate(const std::function<double(double)>& g,
                                 const std::vector<double>& xs) {
  double best = 0.0;
  double prev = g(xs[0]);
  for (std::size_t i = 1; i < xs.size(); ++i) {
    const double cur = g(xs[i]);
    best = std::max(best, std::abs(cur - prev) / (xs[i] - xs[i - 1]));
    prev = cur;
  }
  return best;
}

}  // namespace adhesim::testing
