#include <iostream>

#include <CLI11.hpp>

#include "qfcs/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Energy full counting statistics for a confined system and reservoir"};
  app.require_subcommand(1);

  qfcs::CommandOptions opt;
  std::uint64_t seed = 0;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", opt.config, "Scenario config (JSON)")->required()->check(CLI::ExistingFile);
    sub->add_option("--seed", seed, "Override the reservoir and check seeds");
  };
  auto outputs = [&](CLI::App* sub) { sub->add_option("--out-dir", opt.out_dir, "Output directory")->capture_default_str(); };

  auto* validate = app.add_subcommand("validate", "Parse and validate a scenario config");
  common(validate);

  auto* verify = app.add_subcommand("verify", "Run invariant checks and write verify_report.json");
  common(verify);
  outputs(verify);
  verify->add_option("--suite", opt.suite, "all, operator, states, dynamics, modular or fcs")
      ->check(CLI::IsMember({"all", "operator", "states", "dynamics", "modular", "fcs"}))
      ->capture_default_str();
  verify->add_option("--t", opt.t, "Evolution time")->capture_default_str();

  auto* fcs = app.add_subcommand("fcs", "Write FCS measures, characteristic functions and a summary");
  common(fcs);
  outputs(fcs);
  fcs->add_option("--t", opt.t, "Evolution time")->capture_default_str();
  fcs->add_option("--gamma-grid", opt.gamma_grid, "gamma values: a,b,c or start:stop:count");

  auto* sweep = app.add_subcommand("sweep", "Tabulate the approach to the weak-coupling limit");
  common(sweep);
  outputs(sweep);
  sweep->add_option("--t-grid", opt.t_grid, "t values (default 0:30:31)");
  sweep->add_option("--lambda-grid", opt.lambda_grid, "lambda values (default: the config's lambda)");
  sweep->add_option("--gamma-grid", opt.gamma_grid, "gamma values");
  sweep->add_option("--workers", opt.workers, "Worker threads")->check(CLI::PositiveNumber)->capture_default_str();
  sweep->add_option("--plateau", opt.plateau, "Plateau window t_min t_max")->expected(2)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : qfcs::kExitUsage;
  }
  for (auto* sub : {validate, verify, fcs, sweep})
    if (sub->parsed() && sub->count("--seed")) opt.seed = seed;

  if (validate->parsed()) return qfcs::cmd_validate(opt, std::cout, std::cerr);
  if (verify->parsed()) return qfcs::cmd_verify(opt, std::cout, std::cerr);
  if (fcs->parsed()) return qfcs::cmd_fcs(opt, std::cout, std::cerr);
  return qfcs::cmd_sweep(opt, std::cout, std::cerr);
}
