// Copyright (C) 2026 the ocpsens authors
// SPDX-License-Identifier: Apache-2.0
#include "ocpsens/nlp.hpp"

#include <limits>
#include <utility>

namespace ocpsens {

KktResidual eval_kkt_residual(const NlpFunctions& problem, const Iterate& w,
                              double tau, const Vector& theta) {
  KktResidual r;
  r.stat = problem.objective_grad(w.z, theta);
  if (w.lam.size() > 0) {
    r.stat += problem.eq_jac_tmul(w.z, theta, w.lam);
  }
  if (w.mu.size() > 0) {
    r.stat += problem.ineq_jac_tmul(w.z, theta, w.mu);
  }
  if (!r.stat.allFinite()) {
    throw EvaluationError("non-finite stationarity residual", 0);
  }
  r.eq = problem.eq_constraints(w.z, theta);
  if (!r.eq.allFinite()) {
    throw EvaluationError("non-finite equality residual", 1);
  }
  r.ineq = problem.ineq_constraints(w.z, theta) + w.s;
  if (!r.ineq.allFinite()) {
    throw EvaluationError("non-finite inequality residual", 2);
  }
  r.comp = (w.mu.array() * w.s.array() - tau).matrix();
  if (!r.comp.allFinite()) {
    throw EvaluationError("non-finite complementarity residual", 3);
  }
  r.update_inf_norm();
  return r;
}

RegularityDiagnostics strict_complementarity_margin(const Iterate& w) {
  RegularityDiagnostics d;
  const Eigen::Index n = w.mu.size();
  d.active_set.resize(n);
  if (n == 0) {
    d.strict_comp_margin = std::numeric_limits<double>::infinity();
    return d;
  }
  double margin = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < n; ++i) {
    d.active_set[i] = w.mu[i] >= w.s[i];
    margin = std::min(margin, std::max(w.mu[i], w.s[i]));
  }
  d.strict_comp_margin = margin;
  return d;
}

std::pair<double, Vector> lagrangian_value_grad(const NlpFunctions& problem,
                                                const Iterate& w,
                                                const Vector& theta) {
  double value = problem.objective(w.z, theta);
  Vector grad = problem.objective_grad(w.z, theta);
  if (w.lam.size() > 0) {
    value += w.lam.dot(problem.eq_constraints(w.z, theta));
    grad += problem.eq_jac_tmul(w.z, theta, w.lam);
  }
  if (w.mu.size() > 0) {
    value += w.mu.dot(problem.ineq_constraints(w.z, theta));
    grad += problem.ineq_jac_tmul(w.z, theta, w.mu);
  }
  if (!std::isfinite(value) || !grad.allFinite()) {
    throw EvaluationError("non-finite Lagrangian evaluation", 0);
  }
  return {value, std::move(grad)};
}

}  // namespace ocpsens
