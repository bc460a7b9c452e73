// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "dps/types.hpp"

#include <vector>

namespace dps {

// Grid of candidate steering vectors for the conventional (single phase
// shifter per route) analog structure. Columns are unit norm.
struct Dictionary {
  CMat atoms;               // n_elements x grid_size
  Eigen::VectorXd angles;   // grid_size, radians
};

// Steering vectors on a uniform sin-space grid: sin(angle_g) = -1 + 2g/G.
// G = n_elements gives an orthonormal (DFT-like) basis.
Dictionary build_dictionary(int n_elements, int grid_size);

struct OmpResult {
  CMat analog;                        // selected dictionary columns
  CMat digital;                       // least-squares coefficients
  std::vector<int> atoms;             // selected grid indices, in order
  std::vector<double> residual_norms; // ||target - analog*digital||_F per iteration
};

// Spatially sparse OMP: greedily picks the dictionary column most correlated
// with the residual, refits the digital factor by least squares, repeats for
// n_rf atoms. A positive power_budget applies the transmit power step to the
// digital factor at the end; pass 0 for combiner targets.
OmpResult omp_hybrid(const CMat& target, const Dictionary& dict, int n_rf,
                     double power_budget = 0.0);

}  // namespace dps
