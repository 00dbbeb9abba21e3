// Copyright (C) 2026 the ocpsens authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Core>

#include "ocpsens/errors.hpp"

namespace ocpsens {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Primal-dual point w = (z, lam, mu, s): primal variables, equality
/// multipliers, inequality multipliers and slacks. Inside an interior-point
/// iteration mu and s are strictly positive componentwise.
struct Iterate {
  Vector z;    ///< primal variables, length n_z
  Vector lam;  ///< equality multipliers, length n_g
  Vector mu;   ///< inequality multipliers, length n_h
  Vector s;    ///< slacks, length n_h

  Iterate() = default;
  Iterate(Eigen::Index n_z, Eigen::Index n_g, Eigen::Index n_h)
      : z(Vector::Zero(n_z)),
        lam(Vector::Zero(n_g)),
        mu(Vector::Zero(n_h)),
        s(Vector::Zero(n_h)) {}

  /// Total length n_w = n_z + n_g + 2 n_h of the stacked vector.
  Eigen::Index total_size() const {
    return z.size() + lam.size() + 2 * mu.size();
  }

  /// Stacks (z, lam, mu, s) into one vector, in that order.
  Vector stacked() const {
    Vector out(total_size());
    out << z, lam, mu, s;
    return out;
  }

  bool all_finite() const {
    return z.allFinite() && lam.allFinite() && mu.allFinite() && s.allFinite();
  }
};

/// Residual of the smoothed first-order optimality system at an iterate:
///   stat = grad_z f + G' lam + H' mu
///   eq   = g(z)
///   ineq = h(z) + s
///   comp = mu .* s - tau
struct KktResidual {
  Vector stat;
  Vector eq;
  Vector ineq;
  Vector comp;
  double inf_norm = 0.0;

  /// Stacks the four blocks in iterate order (stat, eq, ineq, comp).
  Vector stacked() const {
    Vector out(stat.size() + eq.size() + ineq.size() + comp.size());
    out << stat, eq, ineq, comp;
    return out;
  }

  /// Recomputes inf_norm from the blocks.
  void update_inf_norm() {
    double m = 0.0;
    if (stat.size() > 0) m = std::max(m, stat.cwiseAbs().maxCoeff());
    if (eq.size() > 0) m = std::max(m, eq.cwiseAbs().maxCoeff());
    if (ineq.size() > 0) m = std::max(m, ineq.cwiseAbs().maxCoeff());
    if (comp.size() > 0) m = std::max(m, comp.cwiseAbs().maxCoeff());
    inf_norm = m;
  }
};

/// Diagnostics for the regularity assumptions the sensitivity formulas rely
/// on. A constraint is classified active when mu_i >= s_i, which is scale
/// free at a central-path point where mu_i * s_i is constant. The margin
/// min_i max(mu_i, s_i) is small exactly when some constraint has both a tiny
/// multiplier and a tiny slack, i.e. strict complementarity is failing.
struct RegularityDiagnostics {
  Eigen::Array<bool, Eigen::Dynamic, 1> active_set;
  double strict_comp_margin = 0.0;  ///< +inf when there are no inequalities
  bool hessian_inertia_ok = true;
};

/// Dense evaluation interface for a parametric NLP
///   min_z f(z; theta)  s.t.  g(z; theta) = 0,  h(z; theta) <= 0.
/// Structured problem classes expose this view for residual evaluation and
/// oracle checks; solvers work on the structured forms directly.
class NlpFunctions {
 public:
  virtual ~NlpFunctions() = default;

  virtual Eigen::Index num_vars() const = 0;    ///< n_z
  virtual Eigen::Index num_eq() const = 0;      ///< n_g
  virtual Eigen::Index num_ineq() const = 0;    ///< n_h
  virtual Eigen::Index num_params() const = 0;  ///< n_theta

  virtual double objective(const Vector& z, const Vector& theta) const = 0;
  virtual Vector objective_grad(const Vector& z, const Vector& theta) const = 0;
  virtual Vector eq_constraints(const Vector& z, const Vector& theta) const = 0;
  virtual Vector ineq_constraints(const Vector& z,
                                  const Vector& theta) const = 0;
  /// Returns G(z; theta)' * lam, the equality-Jacobian transpose product.
  virtual Vector eq_jac_tmul(const Vector& z, const Vector& theta,
                             const Vector& lam) const = 0;
  /// Returns H(z; theta)' * mu, the inequality-Jacobian transpose product.
  virtual Vector ineq_jac_tmul(const Vector& z, const Vector& theta,
                               const Vector& mu) const = 0;
};

/// Evaluates the smoothed KKT residual of `problem` at `w` with barrier
/// parameter `tau`. Throws EvaluationError (with the block index 0..3) if a
/// block evaluates to a non-finite value.
KktResidual eval_kkt_residual(const NlpFunctions& problem, const Iterate& w,
                              double tau, const Vector& theta);

/// Classifies the active set and reports the strict-complementarity margin
/// min_i max(mu_i, s_i). With no inequalities the margin is +infinity.
RegularityDiagnostics strict_complementarity_margin(const Iterate& w);

/// Lagrangian value f + lam'g + mu'h and its gradient in z at `w`.
std::pair<double, Vector> lagrangian_value_grad(const NlpFunctions& problem,
                                                const Iterate& w,
                                                const Vector& theta);

}  // namespace ocpsens
