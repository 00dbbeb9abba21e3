// Copyright (C) 2026 the ocpsens authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>

#include "ocpsens/nlp.hpp"
#include "ocpsens/ocp.hpp"
#include "ocpsens/riccati.hpp"

namespace ocpsens {

enum class SolveStatus { Converged, MaxIter, Breakdown, EvalFail };

const char* to_string(SolveStatus s);

/// Interior-point settings. The barrier parameter starts at tau0 and is
/// reduced by the fixed centering rule tau = max(tau_min, sigma * mu's/n_h)
/// until it reaches the floor tau_min. Convergence is declared when the
/// residual measured against tau_min drops below tol; when tau_min == 0 the
/// barrier is additionally driven down to tau_zero_target first, so that the
/// converged point carries complementarity products small enough for
/// sensitivity extraction rather than products at the residual tolerance.
struct IpmSettings {
  double tau_min = 0.0;
  double tol = 1e-8;
  int max_iter = 100;
  double ftb_gamma = 0.995;  ///< fraction-to-boundary factor
  double tau0 = 1.0;
  double sigma = 0.1;  ///< centering factor of the barrier schedule
  double tau_zero_target = 1e-12;
};

struct IpmStats {
  int iterations = 0;
  double final_tau = 0.0;
  KktResidual final_residual;
  SolveStatus status = SolveStatus::MaxIter;
  int breakdown_stage = -1;  ///< stage index when status == Breakdown
};

/// Solves the stage-structured QP defined by `qp` (variable dz relative to
/// the linearization point) with a primal-dual interior-point iteration:
/// one reduced-matrix factorization per iteration, a single
/// fraction-to-boundary step length for all blocks, and the barrier driven
/// to settings.tau_min. A warm iterate, when given, must have strictly
/// positive mu and s.
std::pair<Iterate, IpmStats> solve_qp(const StageQpData& qp,
                                      const IpmSettings& settings,
                                      const std::optional<Iterate>& warm = {});

/// Largest step alpha = min(1, gamma * sup{a : s + a ds >= (1-gamma) s,
/// mu + a dmu >= (1-gamma) mu}) keeping both vectors strictly positive.
double fraction_to_boundary(const Vector& s, const Vector& mu,
                            const Vector& ds, const Vector& dmu,
                            double gamma);

/// Next barrier value: max(tau_min, sigma * duality_measure).
double barrier_schedule(double duality_measure, double tau_min, double sigma);

/// Residual of the QP step system at (w, tau): the smoothed KKT residual of
/// the quadratic subproblem (used by the IPM loop and by step tests).
KktResidual eval_qp_residual(const StageQpData& qp, const Iterate& w,
                             double tau);

}  // namespace ocpsens
