// SPDX-License-Identifier: Apache-2.0
#include "dps/altmin.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace dps {

namespace {

// Feasible boundary start: every entry at the modulus bound with an
// independent uniform phase. Column-major fill order fixes the draw sequence.
CMat random_feasible_analog(Eigen::Index rows, Eigen::Index cols, double bound, Rng& rng) {
  CMat m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) {
      m(i, j) = std::polar(bound, rng.uniform(0.0, 2.0 * std::numbers::pi));
    }
  return m;
}

AltMinResult altmin_once(const CMat& target, int n_rf, const AltMinOptions& options, Rng& rng) {
  AltMinResult res;
  res.analog = random_feasible_analog(target.rows(), n_rf, options.bound, rng);
  const CMat identity = CMat::Identity(n_rf, n_rf);
  double prev = std::numeric_limits<double>::infinity();

  for (int it = 1; it <= options.max_iter; ++it) {
    res.digital = opp_digital_update(target, res.analog);
    res.history.max_semi_orthogonality_error =
        std::max(res.history.max_semi_orthogonality_error,
                 (res.digital * res.digital.adjoint() - identity).norm());
    res.analog = project_modulus(target * res.digital.adjoint(), options.bound);

    const double objective = (target - res.analog * res.digital).norm();
    res.history.objective.push_back(objective);
    res.history.iterations = it;
    if (it > 1 &&
        prev - objective <= options.tol * std::max(prev, std::numeric_limits<double>::min())) {
      res.history.reason = AltMinHistory::Stop::kTolerance;
      return res;
    }
    prev = objective;
  }
  res.history.reason = AltMinHistory::Stop::kMaxIter;
  return res;
}

}  // namespace

AltMinResult lasso_altmin(const CMat& target, int n_rf, const AltMinOptions& options, Rng& rng) {
  if (n_rf < 1 || target.rows() == 0 || target.cols() < n_rf) {
    throw std::invalid_argument("lasso_altmin: target must be nonempty with cols >= n_rf");
  }
  for (int attempt = 0;; ++attempt) {
    try {
      return altmin_once(target, n_rf, options, rng);
    } catch (const RankDeficient&) {
      if (attempt >= options.reinit_attempts) throw;
    }
  }
}

AltMinResult design_hybrid_combiner(const CMat& target, int n_rf, const AltMinOptions& options,
                                    Rng& rng) {
  // Same alternation as the precoder; the receive side has no power step.
  return lasso_altmin(target, n_rf, options, rng);
}

CMat solve_analog_oracle(const CMat& target, const CMat& digital, double bound, double grad_tol,
                         long max_iter) {
  const double spectral = [&] {
    Eigen::JacobiSVD<CMat> svd(digital);
    return svd.singularValues()(0);
  }();
  if (!(spectral > 0)) {
    throw std::invalid_argument("solve_analog_oracle: digital factor is zero");
  }
  const double lip = spectral * spectral;

  CMat f = project_modulus(target * digital.adjoint(), bound);  // warm start
  for (long it = 0; it < max_iter; ++it) {
    const CMat grad = (f * digital - target) * digital.adjoint();
    CMat next = project_modulus(f - grad / lip, bound);
    const double gradient_mapping = (f - next).norm() * lip;
    f = std::move(next);
    if (gradient_mapping < grad_tol) return f;
  }
  throw NonConvergence("solve_analog_oracle: gradient mapping above tolerance after " +
                       std::to_string(max_iter) + " iterations");
}

}  // namespace dps
