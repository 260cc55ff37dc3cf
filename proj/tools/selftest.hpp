// SPDX-License-Identifier: Apache-2.0
#pragma once

// Quick in-process property checks behind `adhesim_cli selftest`. The full
// suites live in tests/; this is a smoke run usable on an installed binary.

#include <cmath>
#include <functional>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "adhesim/adhesim.hpp"

namespace adhesim::selftest {

struct Check {
  std::string name;
  std::function<bool(std::string&)> run;
};

inline std::vector<Check> checks() {
  std::vector<Check> out;
  out.push_back({"resolvent identity", [](std::string& why) {
    for (auto L : {MonotoneFunction::logarithm(), MonotoneFunction::identity()}) {
      for (double eps : {1.0, 0.1, 0.01}) {
        for (int i = 0; i <= 100; ++i) {
          const double x = -5.0 + 0.1 * i;
          const auto p = L.resolve(x, eps);
          const double lhs = p.r + eps * p.value;
          if (std::abs(lhs - x) > 1e-8 * (1.0 + std::abs(x))) {
            why = "R + eps L_eps != x at x=" + num(x);
            return false;
          }
        }
      }
    }
    return true;
  }});
  out.push_back({"Fenchel equality", [](std::string& why) {
    for (auto L : {MonotoneFunction::logarithm(), MonotoneFunction::identity()}) {
      for (double x : {0.1, 0.5, 1.0, 3.0}) {
        const double gap = L.primitive(x) + L.conjugate(L.eval(x)) - x * L.eval(x);
        if (std::abs(gap) > 1e-10) {
          why = "J + J* != x L(x) at x=" + num(x);
          return false;
        }
      }
    }
    return true;
  }});
  out.push_back({"contact/friction orthogonality", [](std::string& why) {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> d(-3.0, 3.0);
    for (int i = 0; i < 1000; ++i) {
      if (orthogonality_check({d(rng), d(rng)}, {d(rng), d(rng)}, 0.1, 1e-6) != 0.0) {
        why = "nonzero product";
        return false;
      }
    }
    return true;
  }});
  out.push_back({"smoother reproduces constants", [](std::string& why) {
    const Mesh m = build_mesh(8, 2, 2.0, 1.0);
    const SmootherOperator op(NonlocalSmoother{0.75, 1.0}, m.surface);
    const Eigen::VectorXd c = Eigen::VectorXd::Constant(m.surface.num_nodes(), 2.0);
    if ((op.apply_nodal(c) - c).lpNorm<Eigen::Infinity>() > 1e-10) {
      why = "constant not preserved";
      return false;
    }
    return true;
  }});
  out.push_back({"one-step energy balance", [](std::string& why) {
    Scenario sc;
    sc.nx = 4;
    sc.ny = 2;
    sc.loads.body_force = {0.2, -0.5};
    sc.chi0.gauss_amp = -0.2;
    sc.chi0.gauss_width = 0.8;
    sc.solver.tau = 0.01;
    sc.solver.t_end = 0.02;
    const Trajectory t = run_transient(sc);
    for (const auto& e : t.ledger) {
      for (double d : e.dissipation_values())
        if (d < -1e-12) {
          why = "negative dissipation";
          return false;
        }
      if (std::abs(e.residual) > 0.05 * (e.dissipation() + 1e-12)) {
        why = "residual " + num(e.residual) + " vs dissipation " + num(e.dissipation());
        return false;
      }
    }
    return true;
  }});
  return out;
}

/// Runs every check; returns the number of failures.
inline int run_all(std::ostream& os) {
  int failed = 0;
  for (const auto& c : checks()) {
    std::string why;
    bool ok = false;
    try {
      ok = c.run(why);
    } catch (const std::exception& e) {
      why = e.what();
    }
    os << (ok ? "PASS " : "FAIL ") << c.name << (ok ? "" : ": " + why) << '\n';
    failed += ok ? 0 : 1;
  }
  return failed;
}

}  // namespace adhesim::selftest
