// SPDX-License-Identifier: Apache-2.0
#include "dps/evaluation.hpp"

#include "dps/interference.hpp"
#include "dps/omp_baseline.hpp"

#include <Eigen/Cholesky>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

namespace dps {

namespace {

// Substream tags under each trial seed; fixed so results do not depend on
// which algorithms were requested.
constexpr std::uint64_t kStreamChannel = 1;
constexpr std::uint64_t kStreamPrecoderInit = 2;
constexpr std::uint64_t kStreamCombinerBase = 16;

double db_to_sigma2(double snr_db) { return std::pow(10.0, -snr_db / 10.0); }

// log2 det of a Hermitian positive definite matrix via LDLT; false when the
// pivots say otherwise.
bool log2_det_psd(const CMat& m, double& out) {
  Eigen::LDLT<CMat> ldlt(m);
  if (ldlt.info() != Eigen::Success) return false;
  const auto& d = ldlt.vectorD();
  double acc = 0.0;
  for (Eigen::Index i = 0; i < d.size(); ++i) {
    const double di = d(i).real();  // pivots of a Hermitian LDLT are real
    if (!(di > 0.0) || !std::isfinite(di)) return false;
    acc += std::log2(di);
  }
  out = acc;
  return true;
}

// log2 det(I + C^-1 S) with the spec'd fallback: a numerically singular C is
// nudged by 1e-12 * trace(C) * I and the event counted.
double rate_term(CMat c, const CMat& s, int* regularizations) {
  if (s.norm() == 0.0) return 0.0;
  double log_c = 0.0;
  if (!log2_det_psd(c, log_c)) {
    if (regularizations != nullptr) ++(*regularizations);
    const double trace = c.real().trace();
    if (!(trace > 0.0)) return 0.0;  // no noise floor to reason against
    c += 1e-12 * trace * CMat::Identity(c.rows(), c.cols());
    if (!log2_det_psd(c, log_c)) return 0.0;
  }
  double log_cs = 0.0;
  if (!log2_det_psd(CMat(c + s), log_cs)) return 0.0;
  return std::max(0.0, log_cs - log_c);
}

std::vector<Algorithm> normalize_algorithms(const std::vector<Algorithm>& algorithms) {
  std::vector<Algorithm> out;
  for (auto algo : kAllAlgorithms) {
    if (std::find(algorithms.begin(), algorithms.end(), algo) != algorithms.end()) {
      out.push_back(algo);
    }
  }
  return out;
}

// Splits a concatenated n_rf x (K*N_s*F) digital matrix into [user][subcarrier]
// blocks, matching the concat_precoder layout.
std::vector<std::vector<CMat>> split_digital(const CMat& digital, int n_users, int n_subcarriers,
                                             int n_streams) {
  std::vector<std::vector<CMat>> blocks(n_users, std::vector<CMat>(n_subcarriers));
  for (int k = 0; k < n_users; ++k)
    for (int f = 0; f < n_subcarriers; ++f) {
      blocks[k][f] = digital.middleCols((k * n_subcarriers + f) * n_streams, n_streams);
    }
  return blocks;
}

// Per-subcarrier composite digital precoder [block_1 ... block_K].
CMat composite_digital(const std::vector<std::vector<CMat>>& blocks, int f) {
  const int n_users = static_cast<int>(blocks.size());
  const int n_rf = static_cast<int>(blocks[0][0].rows());
  const int n_streams = static_cast<int>(blocks[0][0].cols());
  CMat out(n_rf, n_users * n_streams);
  for (int k = 0; k < n_users; ++k) out.middleCols(k * n_streams, n_streams) = blocks[k][f];
  return out;
}

// Applies the conditional transmit power step jointly across all blocks.
std::vector<std::vector<CMat>> normalize_blocks(const CMat& analog,
                                                std::vector<std::vector<CMat>> blocks,
                                                double budget) {
  double power = 0.0;
  for (const auto& per_user : blocks)
    for (const auto& b : per_user) power += (analog * b).squaredNorm();
  if (!(power > 0.0)) throw ZeroProduct("normalize_blocks: analog * digital is zero");
  if (power <= budget) return blocks;
  const double scale = std::sqrt(budget / power);
  for (auto& per_user : blocks)
    for (auto& b : per_user) b *= scale;
  return blocks;
}

// BD stage shared by the AltMin and OMP pipelines: builds per-subcarrier
// effective channels through the given chain and cascades the nulling blocks.
std::vector<std::vector<CMat>> cancel_interference(
    const ChannelSet& channels, const CMat& analog,
    const std::vector<std::vector<CMat>>& digital_blocks,
    const std::vector<CMat>& combiner_analog,
    const std::vector<std::vector<CMat>>& combiner_digital, const SystemConfig& config) {
  std::vector<std::vector<CMat>> out(config.n_users, std::vector<CMat>(config.n_subcarriers));
  std::vector<CMat> effective(config.n_users);
  for (int f = 0; f < config.n_subcarriers; ++f) {
    const CMat composite = composite_digital(digital_blocks, f);
    for (int k = 0; k < config.n_users; ++k) {
      effective[k] = effective_channel(combiner_digital[k][f], combiner_analog[k],
                                       channels.H[k][f], analog, composite);
    }
    const auto bd_blocks = bd_cancel(effective, config.n_streams);
    for (int k = 0; k < config.n_users; ++k) out[k][f] = cascade(composite, bd_blocks[k]);
  }
  return out;
}

}  // namespace

std::string algorithm_name(Algorithm a) {
  switch (a) {
    case Algorithm::kFullyDigital: return "fully_digital";
    case Algorithm::kAltminBd: return "altmin_bd";
    case Algorithm::kAltminNoBd: return "altmin_no_bd";
    case Algorithm::kOmp: return "omp";
  }
  return "unknown";
}

std::optional<Algorithm> algorithm_from_name(const std::string& name) {
  for (auto algo : kAllAlgorithms) {
    if (algorithm_name(algo) == name) return algo;
  }
  return std::nullopt;
}

double spectral_efficiency(const ChannelSet& channels, const CMat& analog,
                           const std::vector<std::vector<CMat>>& digital,
                           const std::vector<CMat>& combiner_analog,
                           const std::vector<std::vector<CMat>>& combiner_digital, double sigma2,
                           int* regularizations) {
  const int n_users = static_cast<int>(channels.H.size());
  const int n_subcarriers = static_cast<int>(channels.H.front().size());
  const int n_streams = static_cast<int>(digital[0][0].cols());
  const double symbol_power = 1.0 / (static_cast<double>(n_users) * n_streams * n_subcarriers);

  double total = 0.0;
  for (int f = 0; f < n_subcarriers; ++f) {
    for (int k = 0; k < n_users; ++k) {
      // front = W_BB^H W_RF^H; through = front * H * F_RF
      const CMat front = combiner_digital[k][f].adjoint() * combiner_analog[k].adjoint();
      const CMat through = front * channels.H[k][f] * analog;
      const CMat own = through * digital[k][f];
      const CMat signal = symbol_power * (own * own.adjoint());
      CMat cov = sigma2 * (front * front.adjoint());
      for (int j = 0; j < n_users; ++j) {
        if (j == k) continue;
        const CMat cross = through * digital[j][f];
        cov += symbol_power * (cross * cross.adjoint());
      }
      total += rate_term(std::move(cov), signal, regularizations);
    }
  }
  return total / n_subcarriers;
}

AltminPipelineOutput altmin_pipeline(const FullyDigitalPrecoder& fd, const ChannelSet& channels,
                                     const SystemConfig& config, std::uint64_t trial_seed) {
  AltMinOptions options;
  options.tol = config.altmin_tol;
  options.max_iter = config.altmin_max_iter;

  AltminPipelineOutput out;
  {
    Rng rng(Rng::derive(trial_seed, kStreamPrecoderInit));
    auto res = lasso_altmin(concat_precoder(fd), config.n_rf_tx, options, rng);
    out.analog = std::move(res.analog);
    out.history = std::move(res.history);
    out.digital_no_bd =
        split_digital(res.digital, config.n_users, config.n_subcarriers, config.n_streams);
  }

  out.combiner_analog.resize(config.n_users);
  out.combiner_digital.assign(config.n_users, std::vector<CMat>(config.n_subcarriers));
  for (int k = 0; k < config.n_users; ++k) {
    Rng rng(Rng::derive(trial_seed, kStreamCombinerBase + static_cast<std::uint64_t>(k)));
    auto res = design_hybrid_combiner(concat_combiner_user(fd, k), config.n_rf_rx, options, rng);
    out.combiner_analog[k] = std::move(res.analog);
    for (int f = 0; f < config.n_subcarriers; ++f) {
      out.combiner_digital[k][f] =
          res.digital.middleCols(f * config.n_streams, config.n_streams);
    }
  }

  auto bd_blocks = cancel_interference(channels, out.analog, out.digital_no_bd,
                                       out.combiner_analog, out.combiner_digital, config);
  out.digital_bd = normalize_blocks(out.analog, std::move(bd_blocks), config.power_budget());
  out.digital_no_bd =
      normalize_blocks(out.analog, std::move(out.digital_no_bd), config.power_budget());
  return out;
}

OmpPipelineOutput omp_pipeline(const FullyDigitalPrecoder& fd, const ChannelSet& channels,
                               const SystemConfig& config) {
  const int tx_grid = config.omp_grid_size > 0 ? config.omp_grid_size : 2 * config.n_tx;
  const int rx_grid = config.omp_grid_size > 0 ? config.omp_grid_size : 2 * config.n_rx;

  OmpPipelineOutput out;
  const Dictionary tx_dict = build_dictionary(config.n_tx, tx_grid);
  auto pre = omp_hybrid(concat_precoder(fd), tx_dict, config.n_rf_tx);
  out.analog = std::move(pre.analog);
  out.digital = split_digital(pre.digital, config.n_users, config.n_subcarriers, config.n_streams);

  const Dictionary rx_dict = build_dictionary(config.n_rx, rx_grid);
  out.combiner_analog.resize(config.n_users);
  out.combiner_digital.assign(config.n_users, std::vector<CMat>(config.n_subcarriers));
  for (int k = 0; k < config.n_users; ++k) {
    auto comb = omp_hybrid(concat_combiner_user(fd, k), rx_dict, config.n_rf_rx);
    out.combiner_analog[k] = std::move(comb.analog);
    for (int f = 0; f < config.n_subcarriers; ++f) {
      out.combiner_digital[k][f] =
          comb.digital.middleCols(f * config.n_streams, config.n_streams);
    }
  }

  if (config.omp_with_bd) {
    out.digital = cancel_interference(channels, out.analog, out.digital, out.combiner_analog,
                                      out.combiner_digital, config);
  }
  out.digital = normalize_blocks(out.analog, std::move(out.digital), config.power_budget());
  return out;
}

std::uint64_t trial_seed(const SystemConfig& config, std::uint64_t trial_index) {
  return Rng::derive(config.master_seed, trial_index);
}

ChannelSet trial_channels(const SystemConfig& config, std::uint64_t trial_index) {
  Rng channel_rng(Rng::derive(trial_seed(config, trial_index), kStreamChannel));
  return generate_channel_set(config, channel_rng);
}

AltMinResult trial_decomposition(const SystemConfig& config, std::uint64_t trial_index) {
  const ChannelSet channels = trial_channels(config, trial_index);
  const FullyDigitalPrecoder fd = bd_fully_digital(channels, config);
  AltMinOptions options;
  options.tol = config.altmin_tol;
  options.max_iter = config.altmin_max_iter;
  Rng rng(Rng::derive(trial_seed(config, trial_index), kStreamPrecoderInit));
  return lasso_altmin(concat_precoder(fd), config.n_rf_tx, options, rng);
}

TrialOutput run_trial(const SystemConfig& config, std::uint64_t trial_index,
                      const std::vector<Algorithm>& algorithms) {
  const std::vector<Algorithm> algos = normalize_algorithms(algorithms);
  const std::uint64_t seed = trial_seed(config, trial_index);

  TrialOutput out;
  const ChannelSet channels = trial_channels(config, trial_index);

  FullyDigitalPrecoder fd;
  try {
    fd = bd_fully_digital(channels, config);
  } catch (const DegenerateChannel&) {
    out.degenerate = true;
    return out;
  }

  const bool want_altmin =
      std::find(algos.begin(), algos.end(), Algorithm::kAltminBd) != algos.end() ||
      std::find(algos.begin(), algos.end(), Algorithm::kAltminNoBd) != algos.end();
  const bool want_omp = std::find(algos.begin(), algos.end(), Algorithm::kOmp) != algos.end();

  std::optional<AltminPipelineOutput> altmin;
  if (want_altmin) altmin = altmin_pipeline(fd, channels, config, seed);
  std::optional<OmpPipelineOutput> omp;
  if (want_omp) omp = omp_pipeline(fd, channels, config);

  const CMat tx_identity = CMat::Identity(config.n_tx, config.n_tx);
  const std::vector<CMat> rx_identity(config.n_users, CMat::Identity(config.n_rx, config.n_rx));

  for (Algorithm algo : algos) {
    std::vector<double>& se = out.se[algo];
    se.resize(config.snr_grid_db.size());
    for (std::size_t s = 0; s < config.snr_grid_db.size(); ++s) {
      const double sigma2 = db_to_sigma2(config.snr_grid_db[s]);
      switch (algo) {
        case Algorithm::kFullyDigital:
          se[s] = spectral_efficiency(channels, tx_identity, fd.precoder, rx_identity,
                                      fd.combiner, sigma2, &out.regularizations);
          break;
        case Algorithm::kAltminBd:
          se[s] = spectral_efficiency(channels, altmin->analog, altmin->digital_bd,
                                      altmin->combiner_analog, altmin->combiner_digital, sigma2,
                                      &out.regularizations);
          break;
        case Algorithm::kAltminNoBd:
          se[s] = spectral_efficiency(channels, altmin->analog, altmin->digital_no_bd,
                                      altmin->combiner_analog, altmin->combiner_digital, sigma2,
                                      &out.regularizations);
          break;
        case Algorithm::kOmp:
          se[s] = spectral_efficiency(channels, omp->analog, omp->digital, omp->combiner_analog,
                                      omp->combiner_digital, sigma2, &out.regularizations);
          break;
      }
    }
  }
  return out;
}

namespace {

std::vector<TrialOutput> run_trials(const SystemConfig& config,
                                    const std::vector<Algorithm>& algorithms, int threads) {
  const int n = config.n_trials;
  std::vector<TrialOutput> outputs(static_cast<std::size_t>(n));
  if (threads <= 1) {
    for (int t = 0; t < n; ++t) outputs[t] = run_trial(config, t, algorithms);
    return outputs;
  }

  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (;;) {
      const int t = next.fetch_add(1);
      if (t >= n) return;
      try {
        outputs[t] = run_trial(config, t, algorithms);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  const int n_workers = std::min(threads, n);
  pool.reserve(n_workers);
  for (int w = 0; w < n_workers; ++w) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
  return outputs;
}

}  // namespace

ExperimentResult sweep(const SystemConfig& config, SweepAxis axis,
                       const std::vector<int>& nrf_values, const std::vector<Algorithm>& algorithms,
                       int threads) {
  config.validate();
  const std::vector<Algorithm> algos = normalize_algorithms(algorithms);
  if (algos.empty()) throw ConfigError("algorithms: at least one algorithm is required");

  std::vector<int> axis_values;
  if (axis == SweepAxis::kSnr) {
    axis_values = {config.n_rf_tx};
  } else {
    if (nrf_values.empty()) throw ConfigError("nrf_tx_grid: rf_sweep needs at least one value");
    axis_values = nrf_values;
  }

  ExperimentResult result;
  result.config = config;
  result.trial_seeds.reserve(config.n_trials);
  for (int t = 0; t < config.n_trials; ++t) {
    result.trial_seeds.push_back(Rng::derive(config.master_seed, t));
  }

  for (int nrf : axis_values) {
    SystemConfig point = config;
    point.n_rf_tx = nrf;
    point.validate();
    const auto outputs = run_trials(point, algos, threads);

    int degenerate = 0;
    for (const auto& o : outputs) {
      if (o.degenerate) ++degenerate;
      result.regularizations += o.regularizations;
    }
    if (axis == SweepAxis::kSnr || nrf == axis_values.front()) {
      result.degenerate_draws += degenerate;
    }

    for (Algorithm algo : algos) {
      for (std::size_t s = 0; s < point.snr_grid_db.size(); ++s) {
        double sum = 0.0;
        int n_eff = 0;
        for (const auto& o : outputs) {
          if (o.degenerate) continue;
          sum += o.se.at(algo)[s];
          ++n_eff;
        }
        const double mean = n_eff > 0 ? sum / n_eff : 0.0;
        double var = 0.0;
        for (const auto& o : outputs) {
          if (o.degenerate) continue;
          const double d = o.se.at(algo)[s] - mean;
          var += d * d;
        }
        const double stderr_se =
            n_eff > 1 ? std::sqrt(var / (n_eff - 1)) / std::sqrt(static_cast<double>(n_eff)) : 0.0;
        result.rows.push_back({algo, point.snr_grid_db[s], nrf, mean, stderr_se, n_eff});
      }
    }

    for (int t = 0; t < point.n_trials; ++t) {
      const auto& o = outputs[t];
      if (o.degenerate) continue;
      for (Algorithm algo : algos) {
        for (std::size_t s = 0; s < point.snr_grid_db.size(); ++s) {
          result.raw.push_back({t, algo, point.snr_grid_db[s], nrf, o.se.at(algo)[s]});
        }
      }
    }
  }
  return result;
}

}  // namespace dps
