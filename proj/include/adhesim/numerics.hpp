// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <limits>
#include <sstream>
#include <utility>

#include "adhesim/errors.hpp"

namespace adhesim::numerics {

struct RootResult {
  double root = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  int iterations = 0;
  bool converged = false;
};

// Root of a strictly increasing C^1 function. The bracket is grown outward
// from `guess` by doubling steps, then Newton steps are taken inside it and
// replaced by bisection whenever they leave the bracket.
template <class F, class DF>
RootResult solve_increasing(F&& f, DF&& df, double guess, double abs_tol = 1e-12,
                            int max_iter = 200) {
  RootResult res;
  double f0 = f(guess);
  if (f0 == 0.0) {
    res.root = res.lo = res.hi = guess;
    res.converged = true;
    return res;
  }
  double lo = guess, hi = guess;
  double step = 1.0;
  bool bracketed = false;
  for (int k = 0; k < max_iter; ++k) {
    if (f0 < 0.0) {
      hi = guess + step;
      if (f(hi) >= 0.0) {
        bracketed = true;
        break;
      }
      lo = hi;
    } else {
      lo = guess - step;
      if (f(lo) <= 0.0) {
        bracketed = true;
        break;
      }
      hi = lo;
    }
    step *= 2.0;
  }
  res.lo = lo;
  res.hi = hi;
  if (!bracketed) return res;

  double x = guess;
  for (int k = 1; k <= max_iter; ++k) {
    res.iterations = k;
    const double fx = f(x);
    if (fx == 0.0) {
      res.root = x;
      res.lo = res.hi = x;
      res.converged = true;
      return res;
    }
    if (fx < 0.0)
      lo = x;
    else
      hi = x;
    const double d = df(x);
    double xn = (d > 0.0 && std::isfinite(d)) ? x - fx / d : 0.5 * (lo + hi);
    if (!(xn > lo && xn < hi)) xn = 0.5 * (lo + hi);
    const bool done = std::abs(xn - x) <= abs_tol || (hi - lo) <= abs_tol;
    x = xn;
    if (done) {
      res.root = x;
      res.lo = lo;
      res.hi = hi;
      res.converged = true;
      return res;
    }
  }
  res.root = x;
  res.lo = lo;
  res.hi = hi;
  return res;
}

namespace detail {

template <class F>
double simpson_recurse(F& f, double a, double b, double fa, double fm, double fb, double whole,
                       double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  if (depth <= 0) {
    std::ostringstream os;
    os << "adaptive Simpson did not reach tolerance on [" << a << ", " << b
       << "], local error " << std::abs(delta) / 15.0;
    throw QuadratureError(os.str());
  }
  return simpson_recurse(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson_recurse(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace detail

// Adaptive Simpson quadrature of f over [a, b] (a > b allowed) to the given
// relative tolerance. An absolute floor keeps near-zero integrals from
// demanding impossible accuracy.
template <class F>
double integrate(F&& f, double a, double b, double rel_tol = 1e-9, double abs_floor = 1e-14,
                 int max_depth = 48) {
  if (a == b) return 0.0;
  double sign = 1.0;
  if (a > b) {
    std::swap(a, b);
    sign = -1.0;
  }
  // Coarse composite estimate sets the scale for the relative tolerance.
  constexpr int panels = 8;
  const double h = (b - a) / panels;
  double coarse = 0.0;
  double fv[panels + 1];
  double fmid[panels];
  for (int i = 0; i <= panels; ++i) fv[i] = f(a + i * h);
  for (int i = 0; i < panels; ++i) {
    fmid[i] = f(a + (i + 0.5) * h);
    coarse += h / 6.0 * (fv[i] + 4.0 * fmid[i] + fv[i + 1]);
  }
  const double tol = std::max(rel_tol * std::abs(coarse), abs_floor) / panels;
  double sum = 0.0;
  for (int i = 0; i < panels; ++i) {
    const double x0 = a + i * h;
    const double whole = h / 6.0 * (fv[i] + 4.0 * fmid[i] + fv[i + 1]);
    sum += detail::simpson_recurse(f, x0, x0 + h, fv[i], fmid[i], fv[i + 1], whole, tol,
                                   max_depth);
  }
  return sign * sum;
}

}  // namespace adhesim::numerics
