// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "dps/types.hpp"

#include <Eigen/SVD>

#include <cmath>
#include <utility>

namespace dps {

// Orthonormal basis of the right null space of a, as columns. Singular values
// below tol_rel * sigma_max are treated as zero. A matrix with no rows has the
// full space as its null space, so the identity is returned.
template <typename Derived>
typename Derived::PlainObject right_null_space(
    const Eigen::MatrixBase<Derived>& a,
    typename Eigen::NumTraits<typename Derived::Scalar>::Real tol_rel =
        static_cast<typename Eigen::NumTraits<typename Derived::Scalar>::Real>(kRankTol)) {
  using Mat = typename Derived::PlainObject;
  const Eigen::Index n = a.cols();
  if (a.rows() == 0) return Mat::Identity(n, n);

  Eigen::JacobiSVD<Mat> svd(a.derived(), Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  Eigen::Index rank = 0;
  if (sv.size() > 0 && sv(0) > 0) {
    const auto thresh = tol_rel * sv(0);
    while (rank < sv.size() && sv(rank) > thresh) ++rank;
  }
  return svd.matrixV().rightCols(n - rank);
}

// Numerical rank with the same convention as right_null_space.
template <typename Derived>
Eigen::Index numerical_rank(
    const Eigen::MatrixBase<Derived>& a,
    typename Eigen::NumTraits<typename Derived::Scalar>::Real tol_rel =
        static_cast<typename Eigen::NumTraits<typename Derived::Scalar>::Real>(kRankTol)) {
  using Mat = typename Derived::PlainObject;
  if (a.rows() == 0 || a.cols() == 0) return 0;
  Eigen::JacobiSVD<Mat> svd(a.derived());
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || !(sv(0) > 0)) return 0;
  const auto thresh = tol_rel * sv(0);
  Eigen::Index rank = 0;
  while (rank < sv.size() && sv(rank) > thresh) ++rank;
  return rank;
}

}  // namespace dps
