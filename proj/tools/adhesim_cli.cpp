// SPDX-License-Identifier: Apache-2.0
// Command line front end: run, sweep, validate, selftest.
// Exit codes: 0 ok, 1 configuration error, 2 solver error.

#include <CLI11.hpp>
#include <iostream>

#include "adhesim/adhesim.hpp"
#include "selftest.hpp"

namespace {

int guarded(const std::function<int()>& f) {
  try {
    return f();
  } catch (const adhesim::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 1;
  } catch (const adhesim::SolverError& e) {
    std::cerr << "solver error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Thermo-viscoelastic adhesive contact simulator"};
  app.require_subcommand(1);
  std::string path;

  auto* run = app.add_subcommand("run", "run one transient simulation");
  run->add_option("config", path, "configuration file")->required();
  auto* sweep = app.add_subcommand("sweep", "run the regularization sweep listed in sweep.eps");
  sweep->add_option("config", path, "configuration file")->required();
  auto* val = app.add_subcommand("validate", "check a configuration and its material laws");
  val->add_option("config", path, "configuration file")->required();
  app.add_subcommand("selftest", "run quick property checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  using namespace adhesim;
  if (*run) return guarded([&] {
    run_single(parse_config(path), std::cout);
    return 0;
  });
  if (*sweep) return guarded([&] { return run_sweep(parse_config(path), std::cout) ? 0 : 2; });
  if (*val) return guarded([&] {
    const RunConfig rc = parse_config(path);
    const auto model = MaterialModel::from_coefficients(rc.scenario.pair, rc.scenario.coefficients);
    const auto rep = check_hypotheses(model, default_validation_grid());
    std::cout << rep.summary();
    validate(model);
    build_mesh(rc.scenario.nx, rc.scenario.ny, rc.scenario.Lx, rc.scenario.Ly);
    std::cout << "config ok: " << rc.scenario.name << '\n';
    return 0;
  });
  return guarded([] { return selftest::run_all(std::cout) == 0 ? 0 : 2; });
}
