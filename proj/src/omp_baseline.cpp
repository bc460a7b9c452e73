// SPDX-License-Identifier: Apache-2.0
#include "dps/omp_baseline.hpp"

#include "dps/altmin.hpp"
#include "dps/channel.hpp"

#include <Eigen/QR>

#include <cmath>
#include <stdexcept>

namespace dps {

Dictionary build_dictionary(int n_elements, int grid_size) {
  if (grid_size < 1) throw std::invalid_argument("build_dictionary: grid_size must be >= 1");
  Dictionary dict;
  dict.atoms.resize(n_elements, grid_size);
  dict.angles.resize(grid_size);
  for (int g = 0; g < grid_size; ++g) {
    // uniform grid in sin-space
    const double s = -1.0 + 2.0 * g / grid_size;
    dict.angles(g) = std::asin(s);
    dict.atoms.col(g) = array_response_ula(dict.angles(g), n_elements);
  }
  return dict;
}

OmpResult omp_hybrid(const CMat& target, const Dictionary& dict, int n_rf, double power_budget) {
  const int grid = static_cast<int>(dict.atoms.cols());
  if (n_rf < 1 || n_rf > grid) {
    throw std::invalid_argument("omp_hybrid: n_rf must be in [1, grid_size]");
  }

  OmpResult res;
  res.analog.resize(target.rows(), n_rf);
  CMat residual = target;
  std::vector<char> used(grid, 0);

  for (int r = 0; r < n_rf; ++r) {
    const CMat corr = dict.atoms.adjoint() * residual;  // grid x cols
    int best = -1;
    double best_energy = -1.0;
    for (int g = 0; g < grid; ++g) {
      if (used[g]) continue;
      const double energy = corr.row(g).squaredNorm();
      if (energy > best_energy) {
        best_energy = energy;
        best = g;
      }
    }
    used[best] = 1;
    res.atoms.push_back(best);
    res.analog.col(r) = dict.atoms.col(best);

    const auto current = res.analog.leftCols(r + 1);
    res.digital = current.colPivHouseholderQr().solve(target);
    residual = target - current * res.digital;
    res.residual_norms.push_back(residual.norm());
  }

  if (power_budget > 0.0) {
    res.digital = normalize_power(res.analog, res.digital, power_budget);
  }
  return res;
}

}  // namespace dps
