// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "dps/channel.hpp"
#include "dps/types.hpp"

#include <vector>

namespace dps {

// Block-diagonalization precoder/combiner pair used as the approximation
// target: per (user, subcarrier), the precoder lives in the null space of all
// other users' channels and aligns with the top singular directions of the
// projected own channel. Columns are orthonormal, so every block carries unit
// power per stream and the concatenation meets the transmit power budget with
// equality.
struct FullyDigitalPrecoder {
  std::vector<std::vector<CMat>> precoder;  // [user][subcarrier], n_tx x n_streams
  std::vector<std::vector<CMat>> combiner;  // [user][subcarrier], n_rx x n_streams
};

// Throws DegenerateChannel when a projected channel cannot support n_streams;
// the caller records the draw and moves on.
FullyDigitalPrecoder bd_fully_digital(const ChannelSet& channels, const SystemConfig& config);

// Concatenated n_tx x (K*N_s*F) target. Blocks are laid out user-major:
// the block for (user k, subcarrier f) occupies columns (k*F + f)*N_s onward.
CMat concat_precoder(const FullyDigitalPrecoder& fd);

// Per-user combiner target, n_rx x (N_s*F), subcarrier-major.
CMat concat_combiner_user(const FullyDigitalPrecoder& fd, int user);

}  // namespace dps
