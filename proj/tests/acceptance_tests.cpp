// SPDX-License-Identifier: Apache-2.0
//
// End-to-end acceptance suite. Each criterion prints one [PASS]/[FAIL] line;
// the process exits nonzero if any criterion fails.
#include "dps/altmin.hpp"
#include "dps/channel.hpp"
#include "dps/digital_baseline.hpp"
#include "dps/evaluation.hpp"
#include "dps/experiment.hpp"
#include "dps/interference.hpp"
#include "dps/linalg.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

using namespace dps;
namespace fs = std::filesystem;

namespace {

struct Harness {
  int failures = 0;
  int index = 0;

  void criterion(const std::string& name, const std::function<bool(std::string&)>& body) {
    ++index;
    std::string detail;
    bool ok = false;
    try {
      ok = body(detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    std::printf("[%s] criterion %2d: %s%s%s\n", ok ? "PASS" : "FAIL", index, name.c_str(),
                detail.empty() ? "" : " -- ", detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
  }
};

CMat random_complex(Rng& rng, Eigen::Index rows, Eigen::Index cols) {
  CMat m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = rng.complex_normal();
  return m;
}

CMat random_semi_orthogonal_rows(Rng& rng, Eigen::Index rows, Eigen::Index cols) {
  Eigen::JacobiSVD<CMat> svd(random_complex(rng, rows, cols),
                             Eigen::ComputeThinU | Eigen::ComputeThinV);
  return svd.matrixU() * svd.matrixV().adjoint();
}

double mean_of(const ExperimentResult& res, Algorithm algo, double snr_db, int nrf) {
  for (const auto& row : res.rows) {
    if (row.algorithm == algo && row.snr_db == snr_db && row.n_rf_tx == nrf) return row.mean_se;
  }
  throw std::runtime_error("missing result row");
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.3g", v);
  return buf;
}

}  // namespace

int main() {
  Harness h;

  // Shared desk-scale AltMin material for criteria 3-7.
  SystemConfig desk = SystemConfig::desk();
  const int n_draws = 50;
  std::vector<AltMinResult> decompositions;
  decompositions.reserve(n_draws);
  for (int t = 0; t < n_draws; ++t) decompositions.push_back(trial_decomposition(desk, t));

  h.criterion("single-carrier decomposition is exact with minimum RF chains", [&](std::string& d) {
    const auto t0 = std::chrono::steady_clock::now();
    Rng rng(777);
    double worst_res = 0.0, worst_mod = 0.0;
    for (int c = 0; c < 100; ++c) {
      const CMat target = random_complex(rng, 32, 4);  // n_tx=32, K*N_s=4, F=1
      const auto [analog, digital] = exact_decompose_single_carrier(target, 2.0);
      worst_res = std::max(worst_res, (target - analog * digital).norm() / target.norm());
      worst_mod = std::max(worst_mod, analog.cwiseAbs().maxCoeff());
    }
    const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    d = "worst relative residual " + fmt(worst_res) + ", worst modulus " + fmt(worst_mod) +
        ", " + fmt(dt) + " s";
    return worst_res < 1e-10 && worst_mod <= 2.0 && dt < 1.0;
  });

  h.criterion("closed-form analog step matches the convex oracle", [&](std::string& d) {
    Rng rng(778);
    double worst_gap = 0.0, worst_identity = 0.0;
    for (int c = 0; c < 20; ++c) {
      const CMat target = random_complex(rng, 24, 32);
      const CMat digital = random_semi_orthogonal_rows(rng, 6, 32);
      const CMat closed = project_modulus(target * digital.adjoint(), 2.0);
      const CMat oracle = solve_analog_oracle(target, digital);
      worst_gap = std::max(worst_gap, (closed - oracle).norm());

      // objective split identity under the semi-orthogonal constraint
      const CMat analog = project_modulus(2.0 * random_complex(rng, 24, 6), 2.0);
      const double lhs = (target - analog * digital).squaredNorm();
      const double rhs = (analog - target * digital.adjoint()).squaredNorm() +
                         target.squaredNorm() - (target * digital.adjoint()).squaredNorm();
      worst_identity = std::max(worst_identity, std::abs(lhs - rhs) / target.squaredNorm());
    }
    d = "worst oracle gap " + fmt(worst_gap) + ", worst identity error " + fmt(worst_identity);
    return worst_gap < 1e-6 && worst_identity < 1e-9;
  });

  h.criterion("AltMin is monotone and converges by tolerance", [&](std::string& d) {
    int by_tolerance = 0;
    bool monotone = true;
    for (const auto& res : decompositions) {
      for (std::size_t i = 1; i < res.history.objective.size(); ++i) {
        if (res.history.objective[i] > res.history.objective[i - 1] + 1e-12) monotone = false;
      }
      if (res.history.reason == AltMinHistory::Stop::kTolerance &&
          res.history.iterations <= 500) {
        ++by_tolerance;
      }
    }
    d = std::to_string(by_tolerance) + "/" + std::to_string(n_draws) +
        " converged by tolerance, monotone=" + (monotone ? "yes" : "no");
    return monotone && by_tolerance * 10 >= n_draws * 9;
  });

  h.criterion("digital factor is semi-orthogonal after every update", [&](std::string& d) {
    double worst = 0.0;
    for (const auto& res : decompositions) {
      worst = std::max(worst, res.history.max_semi_orthogonality_error);
    }
    Rng rng(779);
    for (int c = 0; c < 10; ++c) {
      const CMat target = random_complex(rng, 16, 24);
      const CMat analog = project_modulus(2.0 * random_complex(rng, 16, 4), 2.0);
      const CMat digital = opp_digital_update(target, analog);
      worst = std::max(worst,
                       (digital * digital.adjoint() - CMat::Identity(4, 4)).norm());
    }
    d = "worst ||F_BB F_BB^H - I||_F = " + fmt(worst);
    return worst < 1e-10;
  });

  h.criterion("fully digital BD nulls interuser interference", [&](std::string& d) {
    double worst = 0.0;
    for (int t = 0; t < n_draws; ++t) {
      const auto channels = trial_channels(desk, t);
      const auto fd = bd_fully_digital(channels, desk);
      for (int f = 0; f < desk.n_subcarriers; ++f)
        for (int k = 0; k < desk.n_users; ++k)
          for (int j = 0; j < desk.n_users; ++j) {
            if (j == k) continue;
            worst = std::max(
                worst,
                (fd.combiner[j][f].adjoint() * channels.H[j][f] * fd.precoder[k][f]).norm());
          }
    }
    d = "worst leak " + fmt(worst) + " over " + std::to_string(n_draws) + " draws";
    return worst < 1e-9;
  });

  h.criterion("hybrid cascade nulls interference end to end", [&](std::string& d) {
    double worst = 0.0;
    for (int t = 0; t < 20; ++t) {
      const auto channels = trial_channels(desk, t);
      const auto fd = bd_fully_digital(channels, desk);
      const auto pipe = altmin_pipeline(fd, channels, desk, trial_seed(desk, t));
      for (int f = 0; f < desk.n_subcarriers; ++f)
        for (int k = 0; k < desk.n_users; ++k)
          for (int j = 0; j < desk.n_users; ++j) {
            if (j == k) continue;
            const CMat leak = pipe.combiner_digital[j][f].adjoint() *
                              pipe.combiner_analog[j].adjoint() * channels.H[j][f] * pipe.analog *
                              pipe.digital_bd[k][f];
            worst = std::max(worst, leak.norm());
          }
    }
    d = "worst end-to-end leak " + fmt(worst) + " over 20 draws";
    return worst < 1e-9;
  });

  h.criterion("power step lands exactly on the budget", [&](std::string& d) {
    if (desk.power_budget() != 32.0 || SystemConfig::paper().power_budget() != 1152.0) {
      d = "budget constants wrong";
      return false;
    }
    double worst_rel = 0.0;   // over-budget branch must hit the budget exactly
    double worst_over = 0.0;  // pipeline outputs must stay within the budget
    for (int t = 0; t < 10; ++t) {
      const auto channels = trial_channels(desk, t);
      const auto fd = bd_fully_digital(channels, desk);
      const auto pipe = altmin_pipeline(fd, channels, desk, trial_seed(desk, t));

      CMat digital(desk.n_rf_tx, desk.n_users * desk.n_streams * desk.n_subcarriers);
      for (int k = 0; k < desk.n_users; ++k)
        for (int f = 0; f < desk.n_subcarriers; ++f) {
          digital.middleCols((k * desk.n_subcarriers + f) * desk.n_streams, desk.n_streams) =
              pipe.digital_bd[k][f];
        }
      worst_over =
          std::max(worst_over, (pipe.analog * digital).squaredNorm() / desk.power_budget());

      // force the scaling branch, then the budget must be met to 1e-9 relative
      const CMat doubled = 2.0 * digital;
      const CMat scaled = normalize_power(pipe.analog, doubled, desk.power_budget());
      const double p = (pipe.analog * scaled).squaredNorm();
      worst_rel = std::max(worst_rel,
                           std::abs(p - desk.power_budget()) / desk.power_budget());
    }
    d = "worst budget error " + fmt(worst_rel) + ", worst pipeline power/budget " +
        fmt(worst_over);
    return worst_rel < 1e-9 && worst_over <= 1.0 + 1e-9;
  });

  SystemConfig fig1 = SystemConfig::desk();
  fig1.snr_grid_db = {-10.0, 0.0, 10.0, 20.0};
  fig1.n_trials = 100;
  const std::vector<Algorithm> all_algos(std::begin(kAllAlgorithms), std::end(kAllAlgorithms));

  h.criterion("SNR sweep reproduces the qualitative ordering", [&](std::string& d) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto res = sweep(fig1, SweepAxis::kSnr, {}, all_algos, 1);
    const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const int nrf = fig1.n_rf_tx;
    const double fd20 = mean_of(res, Algorithm::kFullyDigital, 20.0, nrf);
    const double bd20 = mean_of(res, Algorithm::kAltminBd, 20.0, nrf);
    const double no20 = mean_of(res, Algorithm::kAltminNoBd, 20.0, nrf);
    const double bdm10 = mean_of(res, Algorithm::kAltminBd, -10.0, nrf);
    const double nom10 = mean_of(res, Algorithm::kAltminNoBd, -10.0, nrf);

    bool beats_omp = true;
    for (double snr : fig1.snr_grid_db) {
      if (!(mean_of(res, Algorithm::kAltminBd, snr, nrf) >
            mean_of(res, Algorithm::kOmp, snr, nrf))) {
        beats_omp = false;
      }
    }
    const bool ordering = fd20 >= bd20 && bd20 >= no20;
    const bool gap_grows = (bd20 - no20) > (bdm10 - nom10);
    d = "fd/bd/no-bd at 20 dB = " + fmt(fd20) + "/" + fmt(bd20) + "/" + fmt(no20) +
        ", bd>omp everywhere=" + (beats_omp ? "yes" : "no") + ", " + fmt(dt) + " s";
    return ordering && beats_omp && gap_grows && dt < 600.0;
  });

  h.criterion("RF-chain sweep closes the gap to fully digital", [&](std::string& d) {
    SystemConfig fig2 = SystemConfig::desk();
    fig2.snr_grid_db = {5.0};
    fig2.n_trials = 100;
    const std::vector<Algorithm> algos{Algorithm::kFullyDigital, Algorithm::kAltminBd};
    const std::vector<int> grid{4, 6, 8};
    const auto res = sweep(fig2, SweepAxis::kNrfTx, grid, algos, 1);
    std::vector<double> gap;
    for (int nrf : grid) {
      gap.push_back(mean_of(res, Algorithm::kFullyDigital, 5.0, nrf) -
                    mean_of(res, Algorithm::kAltminBd, 5.0, nrf));
    }
    const double fd8 = mean_of(res, Algorithm::kFullyDigital, 5.0, 8);
    d = "gaps " + fmt(gap[0]) + " / " + fmt(gap[1]) + " / " + fmt(gap[2]) +
        ", final relative gap " + fmt(gap[2] / fd8);
    return gap[0] >= gap[1] && gap[1] >= gap[2] && gap[2] < 0.05 * fd8;
  });

  h.criterion("channel statistics match the model", [&](std::string& d) {
    SystemConfig stat = SystemConfig::desk();
    stat.n_users = 1;
    stat.n_subcarriers = 1;
    Rng rng(2025);
    double acc = 0.0;
    const int n = 10000;
    for (int i = 0; i < n; ++i) {
      const auto rays = sample_ray_parameters(stat, rng);
      acc += build_channel(rays, 0, 0, stat).squaredNorm();
    }
    const double expected = stat.rho(0) * stat.n_tx * stat.n_rx;
    const double rel = std::abs(acc / n - expected) / expected;

    // column-space invariance needs more antennas than scatterers
    SystemConfig wide = SystemConfig::desk();
    wide.n_rx = 16;
    wide.n_users = 1;
    wide.n_subcarriers = 128;
    wide.n_clusters = 2;
    wide.n_rays = 3;
    Rng rng2(2026);
    bool rank_ok = true;
    for (int i = 0; i < 10; ++i) {
      const auto set = generate_channel_set(wide, rng2);
      CMat stacked(wide.n_rx, 2 * wide.n_tx);
      stacked << set.H[0][0], set.H[0][64];
      if (numerical_rank(stacked, 1e-9) > wide.n_clusters * wide.n_rays) rank_ok = false;
    }
    d = "second-moment error " + fmt(rel) + " over 1e4 draws, rank bound " +
        (rank_ok ? "holds" : "violated");
    return rel < 0.05 && rank_ok;
  });

  h.criterion("results are byte-identical across worker counts", [&](std::string& d) {
    SystemConfig cfg = SystemConfig::desk();
    cfg.snr_grid_db = {0.0, 10.0};
    cfg.n_trials = 8;
    const auto res1 = sweep(cfg, SweepAxis::kSnr, {}, all_algos, 1);
    const auto res4 = sweep(cfg, SweepAxis::kSnr, {}, all_algos, 4);
    const fs::path dir = fs::temp_directory_path() / "dpsbeam_acceptance";
    fs::create_directories(dir);
    const std::string p1 = (dir / "workers1.csv").string();
    const std::string p4 = (dir / "workers4.csv").string();
    write_results_csv(p1, res1);
    write_results_csv(p4, res4);
    const bool same = slurp(p1) == slurp(p4);
    d = same ? "CSV bytes identical for 1 and 4 workers" : "CSV bytes differ";
    return same;
  });

  if (h.failures == 0) {
    std::printf("all %d acceptance criteria passed\n", h.index);
  } else {
    std::printf("%d of %d acceptance criteria FAILED\n", h.failures, h.index);
  }
  return h.failures == 0 ? 0 : 1;
}
