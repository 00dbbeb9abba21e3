// Copyright (C) 2026 the ocpsens authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>

#include "ocpsens/ipm.hpp"
#include "ocpsens/ocp.hpp"

namespace ocpsens {

/// Full-step SQP settings. The inner interior-point solver inherits
/// tau_min; its tolerance should be at or below the outer tol.
struct SqpSettings {
  double tol = 1e-8;
  int max_iter = 50;
  HessianMode hessian = HessianMode::exact();
  IpmSettings ipm;

  SqpSettings() { ipm.tol = tol; }

  /// Keeps the inner solver consistent with the outer tolerance and floor.
  void sync_inner() {
    ipm.tol = std::min(ipm.tol, tol);
    ipm.tau_min = tau_min();
  }
  double tau_min() const { return ipm.tau_min; }
  void set_tau_min(double t) { ipm.tau_min = t; }
};

/// Outcome of a nonlinear solve: the converged primal-dual point of the
/// smoothed first-order system, iteration counters and the final residual.
struct SolveResult {
  Iterate w;
  SolveStatus status = SolveStatus::MaxIter;
  int sqp_iterations = 0;
  int total_ipm_iterations = 0;
  KktResidual final_residual;
  int failed_iteration = -1;  ///< outer iteration at which a failure surfaced
};

/// Solves the OCP by full-step SQP: linearize, solve the QP by the
/// interior-point method, apply the whole step, refresh slacks from the
/// nonlinear constraint values, repeat until the smoothed residual at
/// tau_min is below tol. No line search or filter: divergence surfaces as
/// MaxIter. Default initialization holds x0_bar constant over the horizon
/// with zero controls and unit mu = s.
SolveResult solve_nlp(const OcpDefinition& ocp, const Vector& theta,
                      const std::optional<Iterate>& init,
                      const SqpSettings& settings);

/// Convergence test: smoothed residual of the nonlinear problem at `w`.
std::pair<bool, KktResidual> check_convergence(const OcpDefinition& ocp,
                                               const Iterate& w,
                                               const Vector& theta,
                                               double tau_min, double tol);

/// Default cold-start iterate (constant-state rollout, unit mu and s).
Iterate default_init(const OcpDefinition& ocp, const Vector& theta);

}  // namespace ocpsens
