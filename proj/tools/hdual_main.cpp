// hdual: run the identity check-suite or simulate observable dynamics.
//
//   hdual                 same as `hdual check`
//   hdual check
//   hdual simulate --mode quantum --hamiltonian harmonic --observable q --out traj.csv
//
// Exit codes: 0 success, 1 check or integration failure, 2 usage/config error.

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hdual/simulate.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Heisenberg group representations over complex and dual numbers"};
  app.require_subcommand(0, 1);

  auto* check = app.add_subcommand("check", "Run every property suite and report residuals");
  auto* simulate = app.add_subcommand("simulate", "Integrate an observable and write a CSV trajectory");

  std::optional<std::string> config_path;
  simulate->add_option("--config", config_path, "key=value config file; flags override it");

  // Flag name, then config key.
  const std::vector<std::pair<std::string, std::string>> keyed{
      {"--mode", "mode"},       {"--hamiltonian", "hamiltonian"}, {"--observable", "observable"},
      {"--hbar", "hbar"},       {"--t-end", "t-end"},             {"--dt", "dt"},
      {"--convention", "convention"}, {"--out", "out"},
  };
  std::vector<std::optional<std::string>> values(keyed.size());
  for (std::size_t k = 0; k < keyed.size(); ++k) {
    simulate->add_option(keyed[k].first, values[k]);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (simulate->parsed()) {
    hdual::ConfigPairs flags;
    for (std::size_t k = 0; k < keyed.size(); ++k) {
      if (values[k]) flags.emplace_back(keyed[k].second, *values[k]);
    }
    return hdual::cmd_simulate(config_path, flags, std::cout, std::cerr);
  }
  (void)check;
  return hdual::cmd_check(std::cout);
}
