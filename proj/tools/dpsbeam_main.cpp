// SPDX-License-Identifier: Apache-2.0
//
// Experiment CLI: seeded Monte Carlo sweeps over SNR or transmit RF chain
// count, plus a single-decomposition debug mode. Results go to files,
// progress and the summary table to standard error.
#include "dps/config.hpp"
#include "dps/experiment.hpp"

#include <CLI11.hpp>

#include <exception>
#include <iostream>
#include <string>

int main(int argc, char** argv) {
  CLI::App app{"dpsbeam: DPS hybrid precoding experiments for multiuser OFDM mmWave MIMO"};

  std::string config_path;
  std::string preset = "desk";
  std::string mode;
  std::string snr_expr;
  std::string nrf_expr;
  std::string algorithms_expr;
  std::string out_dir;
  int trials = -1;
  std::uint64_t seed = 0;
  int threads = -1;
  bool raw = false;

  app.add_option("--config", config_path, "key=value config file (MANIFEST files work too)");
  app.add_option("--preset", preset, "baseline preset: desk or paper")
      ->check(CLI::IsMember({"desk", "paper"}));
  app.add_option("--mode", mode, "snr_sweep, rf_sweep or decompose_only");
  app.add_option("--snr", snr_expr, "SNR grid in dB as start:step:stop or a single value");
  app.add_option("--trials", trials, "number of Monte Carlo trials");
  auto* seed_opt = app.add_option("--seed", seed, "master seed (uint64)");
  app.add_option("--nrf-tx", nrf_expr, "comma list of transmit RF chain counts (rf_sweep)");
  app.add_option("--algorithms", algorithms_expr,
                 "comma list from fully_digital,altmin_bd,altmin_no_bd,omp");
  app.add_option("--out", out_dir, "output directory (default: current directory)");
  app.add_option("--threads", threads, "worker threads; 0 = hardware concurrency");
  app.add_flag("--raw", raw, "also write the per-trial raw CSV (snr_sweep)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    dps::ExperimentSetup setup = dps::preset_setup(preset);
    if (!config_path.empty()) dps::load_config_file(setup, config_path);

    // flags override file values
    if (!mode.empty()) setup.run.mode = dps::mode_from_name(mode);
    if (!snr_expr.empty()) {
      setup.config.snr_grid_db = dps::parse_snr_range(snr_expr);
    } else if (setup.run.mode == dps::Mode::kRfSweep && config_path.empty()) {
      setup.config.snr_grid_db = {5.0};  // RF-chain sweeps fix the SNR
    }
    if (trials >= 0) setup.config.n_trials = trials;
    if (seed_opt->count() > 0) setup.config.master_seed = seed;
    if (!nrf_expr.empty()) setup.run.nrf_grid = dps::parse_int_list(nrf_expr, "nrf-tx");
    if (!algorithms_expr.empty()) setup.run.algorithms = dps::parse_algorithm_list(algorithms_expr);
    if (!out_dir.empty()) setup.run.out_dir = out_dir;
    if (threads >= 0) setup.run.threads = threads;
    if (raw) setup.run.write_raw = true;

    setup.config.validate();
    dps::run_experiment(setup, std::cerr);
    return 0;
  } catch (const dps::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
