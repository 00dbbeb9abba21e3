// Copyright (C) 2026 the ocpsens authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ocpsens/sensitivity.hpp"
#include "ocpsens/sqp.hpp"

namespace ocpsens {

/// One problem instance of a batch: parameters, an optional initial-state
/// override and an optional warm-start iterate.
struct BatchInstance {
  Vector theta;
  std::optional<Vector> x0_bar;
  std::optional<Iterate> init;
};

/// A batch of independent solve (+ sensitivity) jobs over one shared
/// problem definition. The sensitivity request applies to every instance;
/// adjoint seeds are per-instance (seed index == instance index) when the
/// request carries any.
struct BatchRequest {
  const OcpDefinition* ocp = nullptr;
  std::vector<BatchInstance> instances;
  SqpSettings settings;
  SensitivityRequest::Kind sensitivity = SensitivityRequest::Kind::None;
  std::vector<int> forward_indices;     ///< empty means all parameters
  std::vector<AdjointSeed> adjoint_seeds;
  int workers = 1;
};

/// Per-instance outcome. `error` carries the message of an instance that
/// threw instead of returning a status.
struct BatchItemResult {
  SolveResult solve;
  std::optional<ForwardSensitivities> forward;
  std::optional<AdjointResult> adjoint;
  std::string error;
};

struct BatchResult {
  std::vector<BatchItemResult> items;  ///< ordered as the request instances
  int converged = 0;
  long total_sqp_iterations = 0;
  double wall_time_s = 0.0;
};

/// Runs every instance independently and deterministically: results land in
/// slots ordered like the request regardless of scheduling, one instance's
/// failure never aborts the batch, and the numbers are identical for any
/// worker count (each instance is one indivisible work unit). Parallelized
/// over instances with OpenMP when available.
BatchResult batch_run(const BatchRequest& req);

/// Serial reference implementation of batch_run: same semantics, no
/// threading. Kept for determinism tests and as the comparison baseline of
/// the bench tool.
BatchResult batch_run_serial(const BatchRequest& req);

}  // namespace ocpsens
