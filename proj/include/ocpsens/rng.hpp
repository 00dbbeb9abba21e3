// Copyright (C) 2026 the ocpsens authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>

#include <Eigen/Core>

namespace ocpsens {

/// Deterministic 64-bit PRNG (splitmix64 update). Chosen over the standard
/// library engines because its output is pinned by this implementation and
/// therefore identical across platforms and toolchains, which the
/// reproducibility guarantees rely on. Streams derived via substream() are
/// independent of each other and of how work is scheduled, so per-instance
/// sampling does not depend on worker counts.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double next_uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Uniform double in [lo, hi).
  double next_uniform(double lo, double hi) {
    return lo + (hi - lo) * next_uniform();
  }

  /// Standard normal via Box-Muller (fresh pair per call, one value used;
  /// simple and stateless in exchange for one extra uniform draw).
  double next_normal();

  /// Independent stream for substream index k derived from this
  /// generator's seed; deterministic function of (seed, k).
  SplitMix64 substream(std::uint64_t k) const;

  Eigen::VectorXd normal_vector(Eigen::Index n);
  Eigen::MatrixXd normal_matrix(Eigen::Index rows, Eigen::Index cols);

 private:
  std::uint64_t state_;
};

}  // namespace ocpsens
