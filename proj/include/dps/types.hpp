// SPDX-License-Identifier: Apache-2.0
//
// dpsbeam: hybrid precoding for multiuser OFDM mmWave MIMO with a
// double-phase-shifter (DPS) analog front end, plus the Monte Carlo
// harness used to compare precoding algorithms.
#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace dps {

using Complex = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;

template <typename Scalar>
using ComplexMatrix = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using ComplexVector = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, 1>;

// Singular values below kRankTol * sigma_max count as zero in rank decisions.
inline constexpr double kRankTol = 1e-10;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
// Channel draw cannot support the requested number of streams.
struct DegenerateChannel : std::runtime_error {
  using std::runtime_error::runtime_error;
};
// target^H * analog lost rank during a Procrustes update.
struct RankDeficient : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct InsufficientNullSpace : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ZeroMatrix : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ZeroProduct : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NonConvergence : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Scenario dimensions, channel statistics and experiment controls.
// Symbols follow the usual hybrid-precoding conventions: the base station has
// n_tx antennas and n_rf_tx RF chains, each of the n_users receivers has n_rx
// antennas and n_rf_rx RF chains, and n_streams streams are sent per user on
// each of the n_subcarriers subcarriers.
struct SystemConfig {
  int n_tx = 32;
  int n_rx = 4;
  int n_users = 2;
  int n_subcarriers = 8;
  int n_streams = 2;
  int n_rf_tx = 4;
  int n_rf_rx = 2;
  int n_clusters = 3;
  int n_rays = 8;
  double angular_spread_deg = 10.0;     // per-ray angular std deviation
  std::vector<double> path_loss{1.0};   // rho_k; one entry broadcasts to all users
  std::vector<double> snr_grid_db{-10.0, -5.0, 0.0, 5.0, 10.0, 15.0, 20.0};
  int n_trials = 100;
  std::uint64_t master_seed = 1;
  double altmin_tol = 1e-4;             // relative objective decrease threshold
  int altmin_max_iter = 500;
  int omp_grid_size = 0;                // OMP dictionary size; 0 = 2x antenna count
  bool omp_with_bd = true;              // apply the BD cascade to the OMP baseline

  double rho(int user) const {
    return path_loss.size() == 1 ? path_loss[0] : path_loss[static_cast<std::size_t>(user)];
  }
  double power_budget() const {
    return static_cast<double>(n_users) * n_streams * n_subcarriers;
  }

  // Throws ConfigError naming the offending field and the violated constraint.
  void validate() const;

  static SystemConfig desk();
  static SystemConfig paper();
};

}  // namespace dps
