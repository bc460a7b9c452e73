// SPDX-License-Identifier: Apache-2.0
#include "dps/experiment.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <thread>

namespace dps {

namespace fs = std::filesystem;

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

std::string join_doubles(const std::vector<double>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ',';
    out += format_double(values[i]);
  }
  return out;
}

std::string join_ints(const std::vector<int>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(values[i]);
  }
  return out;
}

std::string join_algorithms(const std::vector<Algorithm>& algos) {
  std::string out;
  for (std::size_t i = 0; i < algos.size(); ++i) {
    if (i) out += ',';
    out += algorithm_name(algos[i]);
  }
  return out;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  return out;
}

std::string utc_now() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void print_summary(std::ostream& os, const ExperimentResult& result) {
  os << "algorithm        snr_db   n_rf_tx   mean_se_bps_hz   stderr     trials\n";
  for (const auto& row : result.rows) {
    char line[160];
    std::snprintf(line, sizeof(line), "%-16s %7.2f %9d %16.4f %8.4f %10d\n",
                  algorithm_name(row.algorithm).c_str(), row.snr_db, row.n_rf_tx, row.mean_se,
                  row.stderr_se, row.trials);
    os << line;
  }
  if (result.degenerate_draws > 0) {
    os << "degenerate draws skipped: " << result.degenerate_draws << "\n";
  }
}

RunPaths run_decompose_only(const ExperimentSetup& setup, std::ostream& progress) {
  const SystemConfig& cfg = setup.config;
  progress << "decompose_only: one channel draw, AltMin on the BD target\n";

  const AltMinResult res = trial_decomposition(cfg, 0);

  RunPaths paths;
  paths.results_csv = (fs::path(setup.run.out_dir) / "trajectory.csv").string();
  paths.manifest = (fs::path(setup.run.out_dir) / "manifest.txt").string();
  {
    auto out = open_out(paths.results_csv);
    out << "iteration,objective\n";
    for (std::size_t i = 0; i < res.history.objective.size(); ++i) {
      out << (i + 1) << ',' << format_double(res.history.objective[i]) << '\n';
    }
  }
  write_manifest(paths.manifest, setup, nullptr, paths);

  // the BD target has unit-norm columns, so its norm is sqrt(K*N_s*F)
  const double target_norm = std::sqrt(cfg.power_budget());
  progress << "target " << cfg.n_tx << "x"
           << cfg.n_users * cfg.n_streams * cfg.n_subcarriers << ", n_rf_tx=" << cfg.n_rf_tx
           << ", iterations=" << res.history.iterations << " ("
           << (res.history.reason == AltMinHistory::Stop::kTolerance ? "tolerance" : "max_iter")
           << "), relative residual="
           << format_double(res.history.objective.back() / target_norm) << "\n";
  return paths;
}

}  // namespace

void write_results_csv(const std::string& path, const ExperimentResult& result) {
  auto out = open_out(path);
  out << "algorithm,snr_db,n_rf_tx,mean_se_bps_hz,stderr,trials\n";
  for (const auto& row : result.rows) {
    out << algorithm_name(row.algorithm) << ',' << format_double(row.snr_db) << ','
        << row.n_rf_tx << ',' << format_double(row.mean_se) << ','
        << format_double(row.stderr_se) << ',' << row.trials << '\n';
  }
}

void write_raw_csv(const std::string& path, const ExperimentResult& result) {
  auto out = open_out(path);
  out << "trial,algorithm,snr_db,se_bps_hz\n";
  for (const auto& rec : result.raw) {
    out << rec.trial << ',' << algorithm_name(rec.algorithm) << ',' << format_double(rec.snr_db)
        << ',' << format_double(rec.se) << '\n';
  }
}

void write_manifest(const std::string& path, const ExperimentSetup& setup,
                    const ExperimentResult* result, const RunPaths& paths) {
  const SystemConfig& cfg = setup.config;
  auto out = open_out(path);
  out << "# dpsbeam run manifest; feed back through --config to reproduce\n";
  out << "# artifact_version=0.1.0\n";
  out << "# created_utc=" << utc_now() << "\n";
  out << "# results_csv=" << paths.results_csv << "\n";
  if (!paths.raw_csv.empty()) out << "# raw_csv=" << paths.raw_csv << "\n";
  if (result != nullptr) {
    out << "# degenerate_draws=" << result->degenerate_draws << "\n";
    out << "# covariance_regularizations=" << result->regularizations << "\n";
    out << "# trial_seeds=";
    for (std::size_t i = 0; i < result->trial_seeds.size(); ++i) {
      if (i) out << ',';
      out << result->trial_seeds[i];
    }
    out << "\n";
  }
  out << "n_tx=" << cfg.n_tx << "\n";
  out << "n_rx=" << cfg.n_rx << "\n";
  out << "n_users=" << cfg.n_users << "\n";
  out << "n_subcarriers=" << cfg.n_subcarriers << "\n";
  out << "n_streams=" << cfg.n_streams << "\n";
  out << "n_rf_tx=" << cfg.n_rf_tx << "\n";
  out << "n_rf_rx=" << cfg.n_rf_rx << "\n";
  out << "n_clusters=" << cfg.n_clusters << "\n";
  out << "n_rays=" << cfg.n_rays << "\n";
  out << "angular_spread_deg=" << format_double(cfg.angular_spread_deg) << "\n";
  out << "path_loss=" << join_doubles(cfg.path_loss) << "\n";
  out << "snr_grid_db=" << join_doubles(cfg.snr_grid_db) << "\n";
  out << "n_trials=" << cfg.n_trials << "\n";
  out << "master_seed=" << cfg.master_seed << "\n";
  out << "altmin_tol=" << format_double(cfg.altmin_tol) << "\n";
  out << "altmin_max_iter=" << cfg.altmin_max_iter << "\n";
  out << "omp_grid_size=" << cfg.omp_grid_size << "\n";
  out << "omp_with_bd=" << (cfg.omp_with_bd ? "true" : "false") << "\n";
  out << "mode=" << mode_name(setup.run.mode) << "\n";
  out << "nrf_tx_grid=" << join_ints(setup.run.nrf_grid) << "\n";
  out << "algorithms=" << join_algorithms(setup.run.algorithms) << "\n";
  out << "threads=" << setup.run.threads << "\n";
  out << "write_raw=" << (setup.run.write_raw ? "true" : "false") << "\n";
}

RunPaths run_experiment(const ExperimentSetup& setup, std::ostream& progress) {
  setup.config.validate();
  fs::create_directories(setup.run.out_dir);

  if (setup.run.mode == Mode::kDecomposeOnly) {
    return run_decompose_only(setup, progress);
  }

  const SweepAxis axis =
      setup.run.mode == Mode::kSnrSweep ? SweepAxis::kSnr : SweepAxis::kNrfTx;
  const int threads = setup.run.threads > 0
                          ? setup.run.threads
                          : static_cast<int>(std::thread::hardware_concurrency());

  progress << mode_name(setup.run.mode) << ": " << setup.config.n_trials << " trials, "
           << setup.config.snr_grid_db.size() << " SNR points, "
           << (axis == SweepAxis::kNrfTx ? setup.run.nrf_grid.size() : 1)
           << " RF-chain points, " << threads << " worker(s)\n";

  const auto t0 = std::chrono::steady_clock::now();
  const ExperimentResult result =
      sweep(setup.config, axis, setup.run.nrf_grid, setup.run.algorithms, threads);
  const auto dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  RunPaths paths;
  paths.results_csv = (fs::path(setup.run.out_dir) / "results.csv").string();
  paths.manifest = (fs::path(setup.run.out_dir) / "manifest.txt").string();
  write_results_csv(paths.results_csv, result);
  if (setup.run.write_raw) {
    if (setup.run.mode == Mode::kSnrSweep) {
      paths.raw_csv = (fs::path(setup.run.out_dir) / "raw.csv").string();
      write_raw_csv(paths.raw_csv, result);
    } else {
      progress << "note: raw per-trial CSV is only written for snr_sweep runs\n";
    }
  }
  write_manifest(paths.manifest, setup, &result, paths);

  progress << "finished in " << std::fixed << std::setprecision(1) << dt << " s\n";
  print_summary(progress, result);
  progress << "results: " << paths.results_csv << "\n";
  return paths;
}

}  // namespace dps
