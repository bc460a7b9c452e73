// SPDX-License-Identifier: Apache-2.0
//
// Residual interuser interference cancellation. The hybrid pair only
// approximates the fully digital precoder, so a low-dimensional BD stage is
// cascaded at baseband: per subcarrier, each user's extra precoder block is
// placed in the null space of the other users' effective channels.
#pragma once

#include "dps/types.hpp"

#include <vector>

namespace dps {

// Effective channel seen by one user through the full hybrid chain:
//   combiner_digital^H * combiner_analog^H * channel * analog * composite_digital,
// shape n_streams x (K * n_streams). composite_digital is the per-subcarrier
// concatenation of all users' digital blocks (n_rf_tx x K*n_streams).
CMat effective_channel(const CMat& combiner_digital, const CMat& combiner_analog,
                       const CMat& channel, const CMat& analog, const CMat& composite_digital);

// BD on the effective channels of one subcarrier. Returns, per user, a
// (K*N_s) x N_s block with orthonormal columns spanning directions that are
// invisible to every other user and strongest for the own effective channel.
std::vector<CMat> bd_cancel(const std::vector<CMat>& effective, int n_streams);

// Final digital block for one (user, subcarrier):
// composite_digital (n_rf_tx x K*N_s) times the user's BD block (K*N_s x N_s).
CMat cascade(const CMat& composite_digital, const CMat& bd_block);

}  // namespace dps
