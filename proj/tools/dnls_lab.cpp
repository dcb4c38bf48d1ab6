// dnls-lab: batch front-end for the DNLS experiments.

#include "dnls/config.hpp"
#include "dnls/runner.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <iostream>

int main(int argc, char** argv) {
  CLI::App app{"dnls-lab: numerical experiments for the derivative nonlinear Schroedinger equation"};
  app.footer(dnls::csv_columns_help() +
             "\nExit codes: 0 success, 1 assertion failure, 2 solver or configuration error.\n"
             "DNLS_LAB_THREADS caps the number of worker threads used by ensembles.");
  app.require_subcommand(1);

  std::string run_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  bool quiet = false;
  auto* run = app.add_subcommand("run", "Run one experiment and write CSV, JSON and manifest.json");
  run->add_option("config", run_path, "YAML configuration file")->required();
  auto* out_opt = run->add_option("--out", out_dir, "Output directory (overrides output_dir)");
  auto* seed_opt = run->add_option("--seed", seed, "Data seed (overrides data.seed)");
  run->add_flag("--quiet", quiet, "Suppress progress output");

  std::string validate_path;
  auto* check = app.add_subcommand("validate", "Parse and validate a configuration file");
  check->add_option("config", validate_path, "YAML configuration file")->required();

  CLI11_PARSE(app, argc, argv);

  if (*check) {
    try {
      const dnls::RunConfig cfg = dnls::load_config(validate_path);
      std::cout << dnls::serialize(cfg);
      return 0;
    } catch (const std::exception& e) {
      std::cerr << validate_path << ": " << e.what() << '\n';
      return dnls::kExitSolverError;
    }
  }

  dnls::RunOptions opts;
  if (*out_opt) opts.out_dir = out_dir;
  if (*seed_opt) opts.seed = seed;
  opts.quiet = quiet;
  opts.log = &std::cerr;
  const dnls::RunOutcome res = dnls::run_file(run_path, opts);
  if (!quiet && res.status == "config-error") std::cerr << run_path << ": " << res.message << '\n';
  if (!quiet) {
    for (const auto& a : res.artifacts) std::cout << res.output_dir << "/" << a << '\n';
  }
  return res.exit_code;
}
