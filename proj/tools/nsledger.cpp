#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "nsledger/cutoffs.hpp"
#include "nsledger/harness.hpp"

using namespace nsledger;

int main(int argc, char** argv) {
  CLI::App app{"Similarity-variable energy ledger for pseudospectral Navier-Stokes runs"};
  app.require_subcommand(1);
  app.fallthrough();

  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  std::optional<double> tolerance_scale;
  app.add_option("--seed", seed, "Override the field seed (run) or base seed (suite)");
  app.add_option("--out-dir", out_dir, "Directory for generated artifacts");
  app.add_option("--tolerance-scale", tolerance_scale, "Multiplier applied to check tolerances")
      ->check(CLI::PositiveNumber);

  std::string config_path;
  auto* run = app.add_subcommand("run", "Run one scenario from a config file");
  run->add_option("config", config_path, "Scenario config")->required();

  std::string suite_name;
  int threads = 0;
  auto* suite = app.add_subcommand("suite", "Run an acceptance group");
  suite->add_option("name", suite_name, "identities, decay, ode, scaling, weakform or all")->required();
  suite->add_option("--threads", threads, "Worker threads; overrides NSLEDGER_THREADS");

  std::vector<double> alphas{0.02, 0.06, 0.1};
  double r_max = 2.5;
  int points = 251;
  auto* profiles = app.add_subcommand("profiles", "Emit cutoff profile tables as CSV");
  profiles->add_option("--alpha", alphas, "Alpha values for the chi profile");
  profiles->add_option("--r-max", r_max, "Largest radius")->check(CLI::PositiveNumber);
  profiles->add_option("--points", points, "Samples per profile")->check(CLI::Range(2, 1000000));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfigError;
  }

  if (*run) {
    ScenarioConfig cfg;
    try {
      cfg = load_scenario(config_path);
    } catch (const ConfigError& e) {
      std::cerr << "configuration error: " << e.what() << "\n";
      return kExitConfigError;
    }
    if (seed) cfg.field.seed = *seed;
    if (out_dir) cfg.out_dir = *out_dir;
    if (tolerance_scale) cfg.check_options.tolerance_scale = *tolerance_scale;
    return run_scenario(cfg, std::cout).exit_code;
  }

  if (*suite) {
    SuiteOptions opts;
    if (seed) opts.seed = *seed;
    if (out_dir) opts.out_dir = *out_dir;
    if (tolerance_scale) opts.tolerance_scale = *tolerance_scale;
    opts.threads = threads;
    return run_suite(suite_name, opts, std::cout);
  }

  try {
    std::vector<CutoffProfile> list{CutoffProfile::phi(), CutoffProfile::one_minus_phi(),
                                    CutoffProfile::tilde()};
    for (double a : alphas) list.push_back(CutoffProfile::chi(a));
    if (out_dir) {
      std::ofstream os(*out_dir + "/profiles.csv");
      if (!os) throw ConfigError("cannot write to " + *out_dir);
      write_profile_table(os, list, r_max, points);
    } else {
      write_profile_table(std::cout, list, r_max, points);
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const std::domain_error& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return kExitConfigError;
  }
  return kExitPass;
}
