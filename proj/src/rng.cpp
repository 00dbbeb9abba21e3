// Copyright (C) 2026 the ocpsens authors
// SPDX-License-Identifier: Apache-2.0
#include "ocpsens/rng.hpp"

#include <cmath>

namespace ocpsens {

double SplitMix64::next_normal() {
  // Box-Muller; u1 is kept away from 0 so the log is finite.
  const double u1 = (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  const double u2 = next_uniform();
  const double two_pi = 6.283185307179586476925286766559;
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(two_pi * u2);
}

SplitMix64 SplitMix64::substream(std::uint64_t k) const {
  // Derive the child seed from the parent state and the index through one
  // scramble round each, so children of distinct (seed, k) pairs do not
  // collide in practice and never share their parent's output sequence.
  SplitMix64 mix(state_ ^ (0xA3EC647659359ACDULL + k));
  const std::uint64_t child_seed = mix.next_u64() + k;
  return SplitMix64(child_seed);
}

Eigen::VectorXd SplitMix64::normal_vector(Eigen::Index n) {
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = next_normal();
  return v;
}

Eigen::MatrixXd SplitMix64::normal_matrix(Eigen::Index rows,
                                          Eigen::Index cols) {
  // Column-major fill, matching the storage order of the result.
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = next_normal();
  return m;
}

}  // namespace ocpsens
