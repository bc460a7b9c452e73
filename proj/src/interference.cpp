// SPDX-License-Identifier: Apache-2.0
#include "dps/interference.hpp"

#include "dps/linalg.hpp"

#include <Eigen/SVD>

#include <string>

namespace dps {

CMat effective_channel(const CMat& combiner_digital, const CMat& combiner_analog,
                       const CMat& channel, const CMat& analog, const CMat& composite_digital) {
  return combiner_digital.adjoint() * combiner_analog.adjoint() * channel * analog *
         composite_digital;
}

std::vector<CMat> bd_cancel(const std::vector<CMat>& effective, int n_streams) {
  const int K = static_cast<int>(effective.size());
  const int width = static_cast<int>(effective[0].cols());  // K * n_streams

  std::vector<CMat> blocks(effective.size());
  CMat stacked((K - 1) * n_streams, width);
  for (int k = 0; k < K; ++k) {
    int r = 0;
    for (int j = 0; j < K; ++j) {
      if (j == k) continue;
      stacked.middleRows(r * n_streams, n_streams) = effective[j];
      ++r;
    }
    const CMat v0 = right_null_space(stacked);
    if (v0.cols() < n_streams) {
      throw InsufficientNullSpace("bd_cancel: null space dimension " + std::to_string(v0.cols()) +
                                  " < n_streams for user " + std::to_string(k));
    }
    // strongest own directions inside the interference-free subspace
    Eigen::JacobiSVD<CMat> svd(CMat(effective[k] * v0), Eigen::ComputeThinV);
    blocks[k] = v0 * svd.matrixV().leftCols(n_streams);
  }
  return blocks;
}

CMat cascade(const CMat& composite_digital, const CMat& bd_block) {
  return composite_digital * bd_block;
}

}  // namespace dps
