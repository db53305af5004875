#include <CLI11.hpp>
#include <iostream>

#include "ingarch/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Poisson and NB INGARCH(1,1) count panels via marginalized state-space models"};
  app.require_subcommand(1);

  ingarch::cli::Options options;
  std::uint64_t seed = 0;
  long horizon = 0;
  std::size_t verify_n = 0;
  std::string lags;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", options.config_path, "flat key = value config file");
    cmd->add_option("--model", options.model, "poisson | nb | random_effects");
    cmd->add_option("--panel", options.panel_path, "panel CSV path");
    cmd->add_option("--out", options.out_path, "output path");
    cmd->add_option("--delta-policy", options.delta_policy,
                    "free_scalar | stationary_from_anchor | fixed_one");
    cmd->add_option("--lags", lags, "comma-separated autocovariance lags");
    cmd->add_option("--seed", seed, "root seed");
    cmd->add_option("--horizon", horizon, "hold-out period");
    cmd->add_option("--verify-n", verify_n, "Monte Carlo replications");
  };

  CLI::App* simulate = app.add_subcommand("simulate", "write a synthetic panel CSV plus latent truth");
  CLI::App* fit = app.add_subcommand("fit", "maximum-likelihood fit, JSON report");
  CLI::App* predict = app.add_subcommand("predict", "one-step-ahead predictions and scores");
  CLI::App* moments = app.add_subcommand("moments", "closed-form moment table CSV");
  CLI::App* verify = app.add_subcommand("verify", "model-property verification report");
  for (CLI::App* cmd : {simulate, fit, predict, moments, verify}) add_common(cmd);
  predict->add_option("--fit", options.fit_report_path, "fit report JSON from the fit subcommand");

  CLI11_PARSE(app, argc, argv);

  CLI::App* active = app.get_subcommands().front();
  if (active->count("--seed") > 0) options.seed = seed;
  if (active->count("--lags") > 0) options.lags = lags;
  if (active->count("--horizon") > 0) options.horizon = horizon;
  if (active->count("--verify-n") > 0) options.verify_n = verify_n;

  try {
    if (simulate->parsed()) return ingarch::cli::cmd_simulate(options);
    if (fit->parsed()) return ingarch::cli::cmd_fit(options);
    if (predict->parsed()) return ingarch::cli::cmd_predict(options);
    if (moments->parsed()) return ingarch::cli::cmd_moments(options);
    if (verify->parsed()) return ingarch::cli::cmd_verify(options);
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 1;
  }
  return 1;
}
