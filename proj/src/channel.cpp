// SPDX-License-Identifier: Apache-2.0
#include "dps/channel.hpp"

#include <cmath>
#include <numbers>

namespace dps {

namespace {

// One user's weighted steering product for a given subcarrier. Kept as the
// single code path for the channel assembly so that stored channel sets and
// entrywise rebuilds are bit-identical.
CMat assemble_channel(const CMat& a_rx, const CMat& a_tx, const UserRays& user, int subcarrier,
                      int n_subcarriers) {
  const int n_clusters = static_cast<int>(user.gain.rows());
  const int n_rays = static_cast<int>(user.gain.cols());
  CVec weights(n_clusters * n_rays);
  int p = 0;
  for (int i = 0; i < n_clusters; ++i) {
    // cluster index doubles as the delay tap
    const Complex delay =
        std::polar(1.0, -2.0 * std::numbers::pi * i * subcarrier / n_subcarriers);
    for (int l = 0; l < n_rays; ++l, ++p) {
      weights(p) = user.gamma * user.gain(i, l) * delay;
    }
  }
  return a_rx * (weights.asDiagonal() * a_tx.adjoint());
}

}  // namespace

RayParameters sample_ray_parameters(const SystemConfig& config, Rng& rng) {
  const double spread_rad = config.angular_spread_deg * std::numbers::pi / 180.0;
  // Laplacian scale giving a per-ray standard deviation equal to the spread.
  const double scale = spread_rad / std::numbers::sqrt2;
  const double two_pi = 2.0 * std::numbers::pi;

  RayParameters rays;
  rays.users.resize(config.n_users);
  for (int k = 0; k < config.n_users; ++k) {
    UserRays& u = rays.users[k];
    u.cluster_aod.resize(config.n_clusters);
    u.cluster_aoa.resize(config.n_clusters);
    u.ray_aod.resize(config.n_clusters, config.n_rays);
    u.ray_aoa.resize(config.n_clusters, config.n_rays);
    u.gain.resize(config.n_clusters, config.n_rays);
    for (int i = 0; i < config.n_clusters; ++i) {
      u.cluster_aod(i) = rng.uniform(0.0, two_pi);
      u.cluster_aoa(i) = rng.uniform(0.0, two_pi);
      for (int l = 0; l < config.n_rays; ++l) {
        u.ray_aod(i, l) = u.cluster_aod(i) + rng.laplace(scale);
        u.ray_aoa(i, l) = u.cluster_aoa(i) + rng.laplace(scale);
        u.gain(i, l) = rng.complex_normal();
      }
    }
    u.gamma = std::sqrt(config.rho(k) * config.n_tx * config.n_rx /
                        static_cast<double>(config.n_clusters * config.n_rays));
  }
  return rays;
}

std::pair<CMat, CMat> steering_matrices(const UserRays& user, int n_rx, int n_tx) {
  const int n_clusters = static_cast<int>(user.gain.rows());
  const int n_rays = static_cast<int>(user.gain.cols());
  CMat a_rx(n_rx, n_clusters * n_rays);
  CMat a_tx(n_tx, n_clusters * n_rays);
  int p = 0;
  for (int i = 0; i < n_clusters; ++i)
    for (int l = 0; l < n_rays; ++l, ++p) {
      a_rx.col(p) = array_response_ula(user.ray_aoa(i, l), n_rx);
      a_tx.col(p) = array_response_ula(user.ray_aod(i, l), n_tx);
    }
  return {std::move(a_rx), std::move(a_tx)};
}

CMat build_channel(const RayParameters& rays, int user, int subcarrier,
                   const SystemConfig& config) {
  const UserRays& u = rays.users[static_cast<std::size_t>(user)];
  const auto [a_rx, a_tx] = steering_matrices(u, config.n_rx, config.n_tx);
  return assemble_channel(a_rx, a_tx, u, subcarrier, config.n_subcarriers);
}

ChannelSet generate_channel_set(const SystemConfig& config, Rng& rng) {
  ChannelSet set;
  set.rays = sample_ray_parameters(config, rng);
  set.H.assign(config.n_users, std::vector<CMat>(config.n_subcarriers));
  for (int k = 0; k < config.n_users; ++k) {
    const UserRays& u = set.rays.users[k];
    const auto [a_rx, a_tx] = steering_matrices(u, config.n_rx, config.n_tx);
    for (int f = 0; f < config.n_subcarriers; ++f) {
      set.H[k][f] = assemble_channel(a_rx, a_tx, u, f, config.n_subcarriers);
    }
  }
  return set;
}

}  // namespace dps
