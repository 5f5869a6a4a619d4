// SPDX-License-Identifier: Apache-2.0
#include "crdra/errors.hpp"
#include "crdra/tools/experiments.hpp"

#include "CLI11.hpp"

#include <fstream>
#include <iostream>

namespace {

struct Flags {
  std::string config;
  std::uint64_t seed = 0;
  std::string out;
  double tol = 0.0;
};

int run(const std::string& experiment, const Flags& flags, bool tol_set) {
  using namespace crdra;
  using namespace crdra::tools;
  ExperimentConfig config = flags.config.empty() ? ExperimentConfig{} : ExperimentConfig::load(flags.config);
  if (flags.config.empty()) {
    if (experiment != "fig2") throw ConfigError("--config is required for " + experiment);
    config = default_fig2_config();
  }
  if (config.experiment.empty()) config.experiment = experiment;
  if (config.id.empty()) config.id = experiment;
  if (config.experiment != experiment) {
    throw ConfigError("config is for '" + config.experiment + "' but '" + experiment + "' was requested");
  }
  config.seed = flags.seed;
  if (tol_set) config.tolerance = flags.tol;
  if (!flags.out.empty()) config.output = flags.out;

  const RunOutcome outcome = run_experiment(config);
  const std::string csv = outcome.table.render();
  if (config.output.empty() || config.output == "-") {
    std::cout << csv;
  } else {
    std::ofstream file(config.output, std::ios::binary);
    if (!file) throw ConfigError("cannot write " + config.output);
    file << csv;
  }
  for (const auto& d : outcome.diagnostics) std::cerr << "crdra: " << d << "\n";
  return outcome.exit_code();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Resource allocation solvers for spectrum-sharing networks"};
  app.require_subcommand(1);

  Flags flags;
  std::vector<CLI::App*> experiments;
  for (const auto& name : crdra::tools::kExperiments) {
    auto* sub = app.add_subcommand(name, "run the " + name + " experiment");
    sub->add_option("--config", flags.config, "JSON experiment file")->check(CLI::ExistingFile);
    sub->add_option("--seed", flags.seed, "random seed")->required();
    sub->add_option("--out", flags.out, "CSV output path (default stdout)");
    sub->add_option("--tol", flags.tol, "solver tolerance")->check(CLI::PositiveNumber);
    experiments.push_back(sub);
  }
  auto* selftest = app.add_subcommand("selftest", "compare solvers against reference oracles");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (selftest->parsed()) return crdra::tools::run_selftest(std::cout) ? 0 : 4;

  for (auto* sub : experiments) {
    if (!sub->parsed()) continue;
    const bool tol_set = sub->get_option("--tol")->count() > 0;
    try {
      return run(sub->get_name(), flags, tol_set);
    } catch (const crdra::ConfigError& e) {
      std::cerr << "crdra: configuration error: " << e.what() << "\n";
      return 2;
    } catch (const crdra::DomainError& e) {
      std::cerr << "crdra: configuration error: " << e.what() << "\n";
      return 2;
    } catch (const crdra::InfeasibleError& e) {
      std::cerr << "crdra: infeasible scenario: " << e.what() << "\n";
      return 3;
    } catch (const std::exception& e) {
      std::cerr << "crdra: solver failure: " << e.what() << "\n";
      return 4;
    }
  }
  return 2;
}
