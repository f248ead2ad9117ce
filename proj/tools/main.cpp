#include <CLI11.hpp>
#include <iostream>
#include <string>
#include <vector>

#include "commands.hpp"

int main(int argc, char** argv) {
  using namespace tamech::cli;
  CLI::App app{"Type-adjustable first-price auction laboratory"};
  app.require_subcommand(1);

  std::string beta_text;
  auto* analyze = app.add_subcommand("analyze", "closed-form payoffs and Pareto verdict");
  analyze->add_option("--beta", beta_text, "impact coefficient (decimal, a/b or sqrt(x))")
      ->required();

  std::string simulate_config;
  unsigned workers = 1;
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo estimates to CSV and JSON");
  simulate->add_option("--config", simulate_config, "scenario file")->required();
  simulate->add_option("--workers", workers, "worker threads (0 = hardware concurrency)");

  std::string beta_list;
  auto* compare = app.add_subcommand("compare", "compare against the optimal-reserve benchmark");
  compare->add_option("--beta", beta_list, "comma-separated beta values")->required();

  std::string verify_config;
  auto* verify = app.add_subcommand("verify", "incentive and equilibrium checks");
  verify->add_option("--config", verify_config, "scenario file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kSuccess : kUsageError;
  }

  try {
    if (*analyze) return cmd_analyze(parse_beta(beta_text), std::cout, std::cerr);
    if (*simulate) return cmd_simulate(simulate_config, workers, std::cout, std::cerr);
    if (*compare) {
      const std::vector<double> betas = parse_beta_list(beta_list);
      return cmd_compare(betas, std::cout, std::cerr);
    }
    if (*verify) return cmd_verify(verify_config, std::cout, std::cerr);
  } catch (const ConfigError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kUsageError;
  }
  return kUsageError;
}
