// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "dps/rng.hpp"
#include "dps/types.hpp"

#include <cmath>
#include <numbers>
#include <type_traits>
#include <utility>
#include <vector>

namespace dps {

// Steering vector of a half-wavelength uniform linear array pointed at the
// given angle (radians). Entry m is exp(j*pi*m*sin(angle)) / sqrt(n), so the
// vector has unit Euclidean norm.
template <typename Scalar>
ComplexVector<Scalar> array_response_ula(Scalar angle, Eigen::Index n_elements) {
  static_assert(std::is_floating_point_v<Scalar>, "angle must be a floating-point scalar");
  const Scalar scale = Scalar(1) / std::sqrt(static_cast<Scalar>(n_elements));
  const Scalar step = std::numbers::pi_v<Scalar> * std::sin(angle);
  ComplexVector<Scalar> v(n_elements);
  for (Eigen::Index m = 0; m < n_elements; ++m) {
    v(m) = std::polar(scale, static_cast<Scalar>(m) * step);
  }
  return v;
}

// Clustered ray geometry and gains for one user. Rays are indexed
// (cluster, ray-within-cluster); the cluster index doubles as the delay tap.
struct UserRays {
  Eigen::VectorXd cluster_aod;  // mean departure angle per cluster
  Eigen::VectorXd cluster_aoa;  // mean arrival angle per cluster
  Eigen::MatrixXd ray_aod;      // n_clusters x n_rays
  Eigen::MatrixXd ray_aoa;      // n_clusters x n_rays
  CMat gain;                    // n_clusters x n_rays, CN(0,1)
  double gamma = 0.0;           // sqrt(rho * n_tx * n_rx / (n_clusters * n_rays))
};

struct RayParameters {
  std::vector<UserRays> users;
};

// Per-user, per-subcarrier channel matrices plus the ray parameters that
// generated them (kept for reproducibility and diagnostics).
struct ChannelSet {
  std::vector<std::vector<CMat>> H;  // [user][subcarrier], each n_rx x n_tx
  RayParameters rays;
};

// Draws cluster means uniformly on [0, 2pi), per-ray angles as cluster mean
// plus a Laplacian offset whose standard deviation equals the configured
// angular spread, and CN(0,1) ray gains.
RayParameters sample_ray_parameters(const SystemConfig& config, Rng& rng);

// Receive (n_rx x P) and transmit (n_tx x P) steering matrices for one user,
// rays ordered cluster-major. P = n_clusters * n_rays.
std::pair<CMat, CMat> steering_matrices(const UserRays& user, int n_rx, int n_tx);

// Frequency-selective clustered channel for one (user, subcarrier): the
// gamma-scaled sum of rank-one steering outer products, each cluster rotated
// by its delay phase exp(-j*2*pi*i*f/F).
CMat build_channel(const RayParameters& rays, int user, int subcarrier,
                   const SystemConfig& config);

// All users and subcarriers from one ray draw. Bit-identical to calling
// build_channel entry by entry.
ChannelSet generate_channel_set(const SystemConfig& config, Rng& rng);

}  // namespace dps
