// SPDX-License-Identifier: Apache-2.0
//
// Alternating minimization of ||target - analog * digital||_F where the
// analog factor is constrained entrywise to the DPS modulus bound and the
// digital factor is kept row-semi-orthogonal. Both block updates have closed
// forms: a Procrustes SVD for the digital factor and an entrywise modulus
// projection for the analog one.
#pragma once

#include "dps/rng.hpp"
#include "dps/types.hpp"

#include <Eigen/SVD>

#include <cmath>
#include <utility>
#include <vector>

namespace dps {

// Entrywise Euclidean projection onto { z : |z| <= bound }. Phases are kept,
// moduli are clipped; zero stays zero.
template <typename Derived>
typename Derived::PlainObject project_modulus(
    const Eigen::MatrixBase<Derived>& z,
    typename Eigen::NumTraits<typename Derived::Scalar>::Real bound = 2) {
  using Scalar = typename Derived::Scalar;
  using Real = typename Eigen::NumTraits<Scalar>::Real;
  return z.derived().unaryExpr([bound](const Scalar& v) {
    const Real m = std::abs(v);
    return m <= bound ? v : Scalar(v * (bound / m));
  });
}

// Row-semi-orthogonal digital factor minimizing ||target - analog * digital||_F
// for fixed analog: digital = V * U^H from the thin SVD U S V^H of
// target^H * analog. Throws RankDeficient when that product loses rank, which
// signals a degenerate analog iterate.
template <typename DerivedA, typename DerivedB>
typename DerivedA::PlainObject opp_digital_update(const Eigen::MatrixBase<DerivedA>& target,
                                                  const Eigen::MatrixBase<DerivedB>& analog) {
  using Mat = typename DerivedA::PlainObject;
  if (target.cols() < analog.cols()) {
    throw RankDeficient("opp_digital_update: target must have at least as many columns as analog");
  }
  Mat m = target.adjoint() * analog.derived();
  Eigen::JacobiSVD<Mat> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  if (!(sv(0) > 0) || sv(sv.size() - 1) <= kRankTol * sv(0)) {
    throw RankDeficient("opp_digital_update: target^H * analog is rank deficient");
  }
  return Mat(svd.matrixV() * svd.matrixU().adjoint());
}

// Exact single-carrier factorization target = analog * digital with
// |analog_ij| <= bound, using the minimum RF-chain count (analog has the same
// shape as target): analog = target / c, digital = c * I with
// c = max |target_ij| / bound.
template <typename Derived>
std::pair<typename Derived::PlainObject, typename Derived::PlainObject>
exact_decompose_single_carrier(const Eigen::MatrixBase<Derived>& target,
                               typename Eigen::NumTraits<typename Derived::Scalar>::Real bound = 2) {
  using Mat = typename Derived::PlainObject;
  using Real = typename Eigen::NumTraits<typename Derived::Scalar>::Real;
  const Real peak = target.cwiseAbs().maxCoeff();
  if (!(peak > 0)) throw ZeroMatrix("exact_decompose_single_carrier: target is zero");
  const Real c = peak / bound;
  // The projection only trims last-ulp overshoot from the division.
  Mat analog = project_modulus(target.derived() / c, bound);
  Mat digital = c * Mat::Identity(target.cols(), target.cols());
  return {std::move(analog), std::move(digital)};
}

// Transmit power step: scales digital so that ||analog * digital||_F^2 equals
// the budget, applied only when the unscaled product exceeds it.
template <typename DerivedA, typename DerivedB>
typename DerivedB::PlainObject normalize_power(
    const Eigen::MatrixBase<DerivedA>& analog, const Eigen::MatrixBase<DerivedB>& digital,
    typename Eigen::NumTraits<typename DerivedB::Scalar>::Real budget) {
  using Real = typename Eigen::NumTraits<typename DerivedB::Scalar>::Real;
  const Real p = (analog.derived() * digital.derived()).squaredNorm();
  if (!(p > 0)) throw ZeroProduct("normalize_power: analog * digital is zero");
  if (p <= budget) return digital.derived();
  return typename DerivedB::PlainObject(digital.derived() * std::sqrt(budget / p));
}

struct AltMinOptions {
  double tol = 1e-4;        // stop when the relative objective decrease falls below
  int max_iter = 500;
  double bound = 2.0;       // DPS entrywise modulus bound
  int reinit_attempts = 3;  // restarts allowed on RankDeficient
};

struct AltMinHistory {
  enum class Stop { kTolerance, kMaxIter };
  std::vector<double> objective;  // ||target - analog*digital||_F after each sweep
  int iterations = 0;
  Stop reason = Stop::kMaxIter;
  // Largest ||digital*digital^H - I||_F observed across sweeps.
  double max_semi_orthogonality_error = 0.0;
};

struct AltMinResult {
  CMat analog;
  CMat digital;
  AltMinHistory history;
};

// Alternates the Procrustes digital update and the modulus projection of
// target * digital^H from a random feasible boundary start until the relative
// objective decrease drops below options.tol or max_iter is hit.
AltMinResult lasso_altmin(const CMat& target, int n_rf, const AltMinOptions& options, Rng& rng);

// Combiner design: same alternation on the per-user combiner target; there is
// no power step on the receive side.
AltMinResult design_hybrid_combiner(const CMat& target, int n_rf, const AltMinOptions& options,
                                    Rng& rng);

// Projected-gradient reference solver for the convex analog subproblem
//   min ||target - analog * digital||_F  s.t.  |analog_ij| <= bound,
// for arbitrary digital. Step 1/||digital||_2^2, run until the gradient
// mapping norm falls below grad_tol. Used as ground truth for the closed form.
CMat solve_analog_oracle(const CMat& target, const CMat& digital, double bound = 2.0,
                         double grad_tol = 1e-8, long max_iter = 100000);

}  // namespace dps
