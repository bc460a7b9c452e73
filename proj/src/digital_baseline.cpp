// SPDX-License-Identifier: Apache-2.0
#include "dps/digital_baseline.hpp"

#include "dps/linalg.hpp"

#include <Eigen/SVD>

#include <string>

namespace dps {

FullyDigitalPrecoder bd_fully_digital(const ChannelSet& channels, const SystemConfig& config) {
  const int K = config.n_users;
  const int F = config.n_subcarriers;
  const int Ns = config.n_streams;

  FullyDigitalPrecoder out;
  out.precoder.assign(K, std::vector<CMat>(F));
  out.combiner.assign(K, std::vector<CMat>(F));

  CMat stacked((K - 1) * config.n_rx, config.n_tx);
  for (int f = 0; f < F; ++f) {
    for (int k = 0; k < K; ++k) {
      int r = 0;
      for (int j = 0; j < K; ++j) {
        if (j == k) continue;
        stacked.middleRows(r * config.n_rx, config.n_rx) = channels.H[j][f];
        ++r;
      }
      const CMat v0 = right_null_space(stacked);
      if (v0.cols() < Ns) {
        throw DegenerateChannel("bd_fully_digital: null space dimension " +
                                std::to_string(v0.cols()) + " < n_streams at user " +
                                std::to_string(k) + ", subcarrier " + std::to_string(f));
      }
      const CMat projected = channels.H[k][f] * v0;
      Eigen::JacobiSVD<CMat> svd(projected, Eigen::ComputeThinU | Eigen::ComputeThinV);
      const auto& sv = svd.singularValues();
      if (sv.size() < Ns || !(sv(0) > 0) || sv(Ns - 1) <= kRankTol * sv(0)) {
        throw DegenerateChannel("bd_fully_digital: projected channel rank < n_streams at user " +
                                std::to_string(k) + ", subcarrier " + std::to_string(f));
      }
      out.precoder[k][f] = v0 * svd.matrixV().leftCols(Ns);
      out.combiner[k][f] = svd.matrixU().leftCols(Ns);
    }
  }
  return out;
}

CMat concat_precoder(const FullyDigitalPrecoder& fd) {
  const int K = static_cast<int>(fd.precoder.size());
  const int F = static_cast<int>(fd.precoder.front().size());
  const int n_tx = static_cast<int>(fd.precoder[0][0].rows());
  const int Ns = static_cast<int>(fd.precoder[0][0].cols());
  CMat out(n_tx, K * F * Ns);
  for (int k = 0; k < K; ++k)
    for (int f = 0; f < F; ++f) out.middleCols((k * F + f) * Ns, Ns) = fd.precoder[k][f];
  return out;
}

CMat concat_combiner_user(const FullyDigitalPrecoder& fd, int user) {
  const auto& blocks = fd.combiner[static_cast<std::size_t>(user)];
  const int F = static_cast<int>(blocks.size());
  const int n_rx = static_cast<int>(blocks[0].rows());
  const int Ns = static_cast<int>(blocks[0].cols());
  CMat out(n_rx, F * Ns);
  for (int f = 0; f < F; ++f) out.middleCols(f * Ns, Ns) = blocks[f];
  return out;
}

}  // namespace dps
