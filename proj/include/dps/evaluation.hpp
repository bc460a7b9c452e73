// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "dps/altmin.hpp"
#include "dps/channel.hpp"
#include "dps/digital_baseline.hpp"
#include "dps/types.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace dps {

enum class Algorithm { kFullyDigital, kAltminBd, kAltminNoBd, kOmp };

inline constexpr Algorithm kAllAlgorithms[] = {Algorithm::kFullyDigital, Algorithm::kAltminBd,
                                               Algorithm::kAltminNoBd, Algorithm::kOmp};

std::string algorithm_name(Algorithm a);
std::optional<Algorithm> algorithm_from_name(const std::string& name);

// Sum spectral efficiency in bits/s/Hz, averaged over subcarriers, treating
// residual interuser interference as Gaussian noise:
//   (1/F) sum_f sum_k log2 det(I + C^-1 * S)
// with per-user signal and interference-plus-noise covariances built from the
// chain combiner_digital^H combiner_analog^H H analog digital and the symbol
// covariance I/(K*N_s*F). The fully digital case is evaluated through the
// same function with identity analog stages. A numerically singular C is
// regularized by 1e-12 * trace(C) * I and counted in *regularizations.
double spectral_efficiency(const ChannelSet& channels, const CMat& analog,
                           const std::vector<std::vector<CMat>>& digital,
                           const std::vector<CMat>& combiner_analog,
                           const std::vector<std::vector<CMat>>& combiner_digital, double sigma2,
                           int* regularizations = nullptr);

// Full LASSO-AltMin transmit/receive chain for one channel draw, shared by
// the with-BD and no-BD variants so their comparison is paired.
struct AltminPipelineOutput {
  CMat analog;                                      // F_RF
  std::vector<CMat> combiner_analog;                // [user]
  std::vector<std::vector<CMat>> combiner_digital;  // [user][subcarrier]
  std::vector<std::vector<CMat>> digital_bd;        // with interference cancellation
  std::vector<std::vector<CMat>> digital_no_bd;     // plain decomposition blocks
  AltMinHistory history;                            // precoder AltMin trajectory
};

AltminPipelineOutput altmin_pipeline(const FullyDigitalPrecoder& fd, const ChannelSet& channels,
                                     const SystemConfig& config, std::uint64_t trial_seed);

struct OmpPipelineOutput {
  CMat analog;
  std::vector<CMat> combiner_analog;
  std::vector<std::vector<CMat>> combiner_digital;
  std::vector<std::vector<CMat>> digital;
};

OmpPipelineOutput omp_pipeline(const FullyDigitalPrecoder& fd, const ChannelSet& channels,
                               const SystemConfig& config);

struct TrialOutput {
  // se[algorithm][snr index], following config.snr_grid_db.
  std::map<Algorithm, std::vector<double>> se;
  bool degenerate = false;
  int regularizations = 0;
};

// Root seed of one trial's substreams (channel draw, AltMin inits).
std::uint64_t trial_seed(const SystemConfig& config, std::uint64_t trial_index);

// The channel draw a given trial sees.
ChannelSet trial_channels(const SystemConfig& config, std::uint64_t trial_index);

// AltMin decomposition of one trial's BD target, seeded exactly as inside
// run_trial. Backs the decompose_only CLI mode.
AltMinResult trial_decomposition(const SystemConfig& config, std::uint64_t trial_index);

// One seeded channel draw: generates channels, builds the BD target once and
// runs every requested algorithm on the same draw. Precoders are noise
// independent, so the SNR grid reuses them. Deterministic in
// (config, trial_index) regardless of scheduling.
TrialOutput run_trial(const SystemConfig& config, std::uint64_t trial_index,
                      const std::vector<Algorithm>& algorithms);

struct ResultRow {
  Algorithm algorithm;
  double snr_db;
  int n_rf_tx;
  double mean_se;    // bits/s/Hz over non-degenerate trials
  double stderr_se;  // sample standard error of the mean
  int trials;        // non-degenerate trial count
};

struct RawRecord {
  int trial;
  Algorithm algorithm;
  double snr_db;
  int n_rf_tx;
  double se;
};

struct ExperimentResult {
  std::vector<ResultRow> rows;
  std::vector<RawRecord> raw;
  SystemConfig config;
  std::vector<std::uint64_t> trial_seeds;
  int degenerate_draws = 0;
  int regularizations = 0;
};

enum class SweepAxis { kSnr, kNrfTx };

// Monte Carlo sweep over the SNR grid (axis kSnr) or over transmit RF chain
// counts at the configured SNR grid (axis kNrfTx, values in nrf_values).
// Trials run in parallel across `threads` workers; per-trial seeding plus
// fixed-order aggregation make the result bit-identical for any worker count.
ExperimentResult sweep(const SystemConfig& config, SweepAxis axis,
                       const std::vector<int>& nrf_values, const std::vector<Algorithm>& algorithms,
                       int threads);

}  // namespace dps
