// Copyright (C) 2026 the ocpsens authors
// SPDX-License-Identifier: Apache-2.0
#include "ocpsens/sqp.hpp"

#include <algorithm>
#include <stdexcept>
#include <utility>

#include "ocpsens/errors.hpp"
#include "ocpsens/nlp.hpp"

namespace ocpsens {

namespace {

constexpr double kSlackFloor = 1e-6;

void validate_iterate(const OcpDimensions& dims, const Iterate& w) {
  if (w.z.size() != dims.n_z() || w.lam.size() != dims.n_g() ||
      w.mu.size() != dims.n_ineq() || w.s.size() != dims.n_ineq()) {
    throw std::invalid_argument("initial iterate has wrong dimensions");
  }
  for (Eigen::Index i = 0; i < w.mu.size(); ++i) {
    if (!(w.mu[i] > 0.0) || !(w.s[i] > 0.0)) {
      throw std::invalid_argument(
          "initial multipliers and slacks must be strictly positive");
    }
  }
}

}  // namespace

Iterate default_init(const OcpDefinition& ocp, const Vector& theta) {
  const OcpDimensions& dims = ocp.dims;
  const TrajectoryLayout lay(dims);
  Iterate w;
  w.z = Vector::Zero(dims.n_z());
  const Vector x0 = ocp.initial_state(theta);
  for (int n = 0; n <= dims.N; ++n) {
    w.z.segment(lay.x_offset(n), dims.n_x) = x0;
  }
  w.lam = Vector::Zero(dims.n_g());
  w.mu = Vector::Ones(dims.n_ineq());
  w.s = Vector::Ones(dims.n_ineq());
  return w;
}

std::pair<bool, KktResidual> check_convergence(const OcpDefinition& ocp,
                                               const Iterate& w,
                                               const Vector& theta,
                                               double tau_min, double tol) {
  const OcpNlpAdapter nlp(ocp);
  KktResidual res = eval_kkt_residual(nlp, w, tau_min, theta);
  return {res.inf_norm <= tol, std::move(res)};
}

SolveResult solve_nlp(const OcpDefinition& ocp, const Vector& theta,
                      const std::optional<Iterate>& init,
                      const SqpSettings& settings) {
  ocp.dims.validate();
  SqpSettings cfg = settings;
  cfg.sync_inner();

  SolveResult result;
  result.w = init ? *init : default_init(ocp, theta);
  validate_iterate(ocp.dims, result.w);

  const OcpNlpAdapter nlp(ocp);
  for (int it = 0;; ++it) {
    bool converged = false;
    try {
      auto [ok, res] = check_convergence(ocp, result.w, theta, cfg.tau_min(),
                                         cfg.tol);
      converged = ok;
      result.final_residual = std::move(res);
    } catch (const EvaluationError&) {
      result.status = SolveStatus::EvalFail;
      result.failed_iteration = it;
      return result;
    }
    result.sqp_iterations = it;
    if (converged) {
      result.status = SolveStatus::Converged;
      return result;
    }
    if (it >= cfg.max_iter) {
      result.status = SolveStatus::MaxIter;
      return result;
    }

    StageQpData qp;
    try {
      qp = linearize_at(ocp, result.w, theta, cfg.hessian);
    } catch (const EvaluationError&) {
      result.status = SolveStatus::EvalFail;
      result.failed_iteration = it;
      return result;
    } catch (const NonsmoothError&) {
      result.status = SolveStatus::EvalFail;
      result.failed_iteration = it;
      return result;
    }

    // The QP variable is the step dz; warm-start the duals and slacks from
    // the current outer iterate so a stationary point is a fixed point.
    Iterate warm;
    warm.z = Vector::Zero(ocp.dims.n_z());
    warm.lam = result.w.lam;
    warm.mu = result.w.mu;
    warm.s = result.w.s;
    auto [qp_w, qp_stats] = solve_qp(qp, cfg.ipm, &warm);
    result.total_ipm_iterations += qp_stats.iterations;
    if (qp_stats.status != SolveStatus::Converged) {
      result.status = qp_stats.status;
      result.failed_iteration = it;
      return result;
    }

    result.w.z += qp_w.z;
    result.w.lam = qp_w.lam;
    result.w.mu = qp_w.mu;
    // Refresh slacks from the nonlinear constraint values at the new point:
    // s_i = -h_i where that is strictly interior, floored otherwise so the
    // next warm start stays strictly positive.
    try {
      const Vector h = nlp.ineq_constraints(result.w.z, theta);
      for (Eigen::Index i = 0; i < h.size(); ++i) {
        result.w.s[i] = -h[i] > 0.0 ? -h[i] : kSlackFloor;
      }
    } catch (const EvaluationError&) {
      result.status = SolveStatus::EvalFail;
      result.failed_iteration = it;
      return result;
    }
  }
}

}  // namespace ocpsens
