// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "dps/types.hpp"

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>

namespace dps {

// Deterministic random source. All distributions are implemented explicitly
// on top of mt19937_64 so that draws are bit-reproducible across compilers
// and standard libraries; std::*_distribution is implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  // Uniform on [0, 1).
  double uniform() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Standard normal via Box-Muller; the second draw of each pair is cached.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = 1.0 - uniform();  // (0, 1], keeps log finite
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
  }

  // Zero-mean Laplacian with the given scale; variance = 2*scale^2.
  double laplace(double scale) {
    const double u = uniform() - 0.5;
    double t = 1.0 - 2.0 * std::abs(u);
    if (t <= 0.0) t = std::numeric_limits<double>::min();
    const double mag = -scale * std::log(t);
    return u < 0.0 ? -mag : mag;
  }

  // Circularly-symmetric complex normal, zero mean, unit variance.
  Complex complex_normal() {
    const double re = normal();
    const double im = normal();
    return Complex(re, im) * std::numbers::sqrt2 / 2.0;
  }

  // Stable derivation of substream seeds from (seed, stream). Used to give
  // every trial and every consumer inside a trial its own generator, which
  // keeps results independent of execution order and worker count.
  static std::uint64_t derive(std::uint64_t seed, std::uint64_t stream) {
    return splitmix64(splitmix64(seed) ^ splitmix64(stream + 0x9E3779B97F4A7C15ull));
  }

 private:
  static std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
  }

  std::mt19937_64 gen_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace dps
