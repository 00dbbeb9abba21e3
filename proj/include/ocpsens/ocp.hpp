// Copyright (C) 2026 the ocpsens authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <memory>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "ocpsens/derivatives.hpp"
#include "ocpsens/dual.hpp"
#include "ocpsens/nlp.hpp"

namespace ocpsens {

/// Dimensions of a stage-structured optimal control problem. Stage
/// dimensions are constant over the horizon.
struct OcpDimensions {
  int N = 0;        ///< number of stages (>= 1)
  int n_x = 0;      ///< state dimension
  int n_u = 0;      ///< control dimension
  int n_h = 0;      ///< path constraints per stage
  int n_h_N = 0;    ///< terminal constraints
  int n_theta = 0;  ///< parameter count

  Eigen::Index n_z() const {
    return static_cast<Eigen::Index>(N + 1) * n_x +
           static_cast<Eigen::Index>(N) * n_u;
  }
  Eigen::Index n_g() const { return static_cast<Eigen::Index>(N + 1) * n_x; }
  Eigen::Index n_ineq() const {
    return static_cast<Eigen::Index>(N) * n_h + n_h_N;
  }
  Eigen::Index n_w() const { return n_z() + n_g() + 2 * n_ineq(); }

  /// Throws std::invalid_argument on inconsistent values.
  void validate() const;
};

/// Offsets of the stage blocks inside the flat primal/dual vectors.
/// Variable order: z = (x_0, u_0, x_1, u_1, ..., x_{N-1}, u_{N-1}, x_N).
/// Equality order: the n_x initial-state rows, then N dynamics blocks.
/// Inequality order: N path blocks of n_h rows, then n_h_N terminal rows.
struct TrajectoryLayout {
  OcpDimensions dims;

  explicit TrajectoryLayout(OcpDimensions d) : dims(d) {}

  Eigen::Index x_offset(int n) const {
    return static_cast<Eigen::Index>(n) * (dims.n_x + dims.n_u);
  }
  Eigen::Index u_offset(int n) const { return x_offset(n) + dims.n_x; }
  /// Rows of the dynamics equality x_{n+1} = f(x_n, u_n); n in [0, N).
  Eigen::Index eq_dyn_row(int n) const {
    return static_cast<Eigen::Index>(n + 1) * dims.n_x;
  }
  Eigen::Index ineq_stage_row(int n) const {
    return static_cast<Eigen::Index>(n) * dims.n_h;
  }
  Eigen::Index ineq_terminal_row() const {
    return static_cast<Eigen::Index>(dims.N) * dims.n_h;
  }
};

/// Scalar-generic problem callbacks for one arithmetic type T. The library
/// instantiates these at double (values), Dual1 (first derivatives) and
/// Dual2 (second derivatives); see make_ocp_definition.
template <typename T>
struct StageFunctions {
  /// Stage cost L_n(x, u; theta), n in [0, N).
  std::function<T(int, const VecX<T>&, const VecX<T>&, const VecX<T>&)>
      stage_cost;
  /// Terminal cost M(x_N; theta).
  std::function<T(const VecX<T>&, const VecX<T>&)> terminal_cost;
  /// Discrete dynamics x_{n+1} = f_n(x, u; theta).
  std::function<VecX<T>(int, const VecX<T>&, const VecX<T>&, const VecX<T>&)>
      dynamics;
  /// Path constraints h_n(x, u; theta) <= 0, length n_h (may be unset when
  /// n_h == 0).
  std::function<VecX<T>(int, const VecX<T>&, const VecX<T>&, const VecX<T>&)>
      path_ineq;
  /// Terminal constraints h_N(x_N; theta) <= 0, length n_h_N (may be unset
  /// when n_h_N == 0).
  std::function<VecX<T>(const VecX<T>&, const VecX<T>&)> terminal_ineq;
};

/// A parametric optimal control problem
///
///   min  sum_n L_n(x_n, u_n; theta) + M(x_N; theta)
///   s.t. x_0 = x0_bar,  x_{n+1} = f_n(x_n, u_n; theta),
///        h_n(x_n, u_n; theta) <= 0,  h_N(x_N; theta) <= 0.
///
/// Problem functions are stored as type-erased callbacks at three scalar
/// types so that values, Jacobians and Hessians all come from the same
/// user-supplied expression. Optional analytic parameter-derivative hooks
/// short-circuit the dual-number fallback where speed matters.
struct OcpDefinition {
  OcpDimensions dims;
  Vector x0_bar;  ///< initial state (ignored when x0_param_offset >= 0)

  /// When >= 0, the initial state is read from
  /// theta.segment(x0_param_offset, n_x) instead of x0_bar, so that
  /// sensitivities with respect to the initial state come out of the same
  /// parameter machinery.
  int x0_param_offset = -1;

  StageFunctions<double> f_val;
  StageFunctions<Dual1> f_jac;
  StageFunctions<Dual2> f_hess;

  // --- optional analytic parameter derivatives --------------------------
  // When unset, nested dual numbers are used instead. Shapes are
  // rows x n_theta with rows as indicated.

  /// d/dtheta of grad_{(x,u)} [L_n + lam_next' f_n + mu_n' h_n];
  /// rows n_x + n_u.
  std::function<Matrix(int, const Vector&, const Vector&, const Vector&,
                       const Vector&, const Vector&)>
      stat_param_jac;
  /// d/dtheta of grad_x [M + mu_N' h_N]; rows n_x.
  std::function<Matrix(const Vector&, const Vector&, const Vector&)>
      stat_param_jac_terminal;
  /// d/dtheta of f_n(x, u; theta); rows n_x.
  std::function<Matrix(int, const Vector&, const Vector&, const Vector&)>
      dyn_param_jac;
  /// d/dtheta of h_n(x, u; theta); rows n_h.
  std::function<Matrix(int, const Vector&, const Vector&, const Vector&)>
      ineq_param_jac;
  /// d/dtheta of h_N(x_N; theta); rows n_h_N.
  std::function<Matrix(const Vector&, const Vector&)> ineq_param_jac_terminal;

  /// Effective initial state for the given parameters.
  Vector initial_state(const Vector& theta) const {
    if (x0_param_offset >= 0) return theta.segment(x0_param_offset, dims.n_x);
    return x0_bar;
  }

  template <typename T>
  const StageFunctions<T>& functions() const {
    if constexpr (std::is_same_v<T, double>) {
      return f_val;
    } else if constexpr (std::is_same_v<T, Dual1>) {
      return f_jac;
    } else {
      static_assert(std::is_same_v<T, Dual2>);
      return f_hess;
    }
  }
};

/// Builds an OcpDefinition from a model type with scalar-generic methods:
///
///   struct Model {
///     template <typename T> T stage_cost(int n, x, u, theta) const;
///     template <typename T> T terminal_cost(x, theta) const;
///     template <typename T> VecX<T> dynamics(int n, x, u, theta) const;
///     template <typename T> VecX<T> path_ineq(int n, x, u, theta) const;
///     template <typename T> VecX<T> terminal_ineq(x, theta) const;
///   };
///
/// One shared copy of the model backs all three scalar instantiations.
template <typename Model>
OcpDefinition make_ocp_definition(OcpDimensions dims, Vector x0_bar,
                                  Model model) {
  dims.validate();
  auto m = std::make_shared<const Model>(std::move(model));
  OcpDefinition ocp;
  ocp.dims = dims;
  ocp.x0_bar = std::move(x0_bar);
  auto bind = [&m](auto& fns) {
    using T = typename std::decay_t<decltype(fns.stage_cost)>::result_type;
    fns.stage_cost = [m](int n, const VecX<T>& x, const VecX<T>& u,
                         const VecX<T>& th) {
      return m->stage_cost(n, x, u, th);
    };
    fns.terminal_cost = [m](const VecX<T>& x, const VecX<T>& th) {
      return m->terminal_cost(x, th);
    };
    fns.dynamics = [m](int n, const VecX<T>& x, const VecX<T>& u,
                       const VecX<T>& th) {
      return m->dynamics(n, x, u, th);
    };
    fns.path_ineq = [m](int n, const VecX<T>& x, const VecX<T>& u,
                        const VecX<T>& th) {
      return m->path_ineq(n, x, u, th);
    };
    fns.terminal_ineq = [m](const VecX<T>& x, const VecX<T>& th) {
      return m->terminal_ineq(x, th);
    };
  };
  bind(ocp.f_val);
  bind(ocp.f_jac);
  bind(ocp.f_hess);
  return ocp;
}

/// Hessian handling of the QP data: Exact contracts the multipliers against
/// the dynamics and constraint curvature; GaussNewton keeps only the cost
/// curvature (the least-squares J'WJ term for the quadratic costs used
/// here). The Levenberg-Marquardt multiple of the identity is added after
/// assembly in either mode.
struct HessianMode {
  enum class Kind { Exact, GaussNewton };
  Kind kind = Kind::Exact;
  double levenberg_marquardt = 0.0;

  static HessianMode exact(double lm = 0.0) {
    return {Kind::Exact, lm};
  }
  static HessianMode gauss_newton(double lm = 0.0) {
    return {Kind::GaussNewton, lm};
  }
};

/// Per-stage data of the QP obtained by linearizing the OCP at an iterate:
/// Hessian blocks Q over (x, u), gradients q, dynamics linearization
/// (A, B, b) with residual b = f(x_n, u_n) - x_{n+1}, constraint rows
/// (C, D, h). The QP variable is the step dz relative to the linearization
/// point; the initial-state equality row carries residual r_init.
struct StageQpData {
  OcpDimensions dims;
  HessianMode mode;

  std::vector<Matrix> Q;  ///< N blocks, (n_x+n_u)^2
  std::vector<Vector> q;  ///< N blocks, n_x+n_u
  std::vector<Matrix> A;  ///< N blocks, n_x x n_x
  std::vector<Matrix> B;  ///< N blocks, n_x x n_u
  std::vector<Vector> b;  ///< N blocks, n_x
  std::vector<Matrix> C;  ///< N blocks, n_h x n_x
  std::vector<Matrix> D;  ///< N blocks, n_h x n_u
  std::vector<Vector> h;  ///< N blocks, n_h

  Matrix Q_term;  ///< n_x x n_x
  Vector q_term;  ///< n_x
  Matrix C_term;  ///< n_h_N x n_x
  Vector h_term;  ///< n_h_N

  Vector r_init;  ///< x_0 - x0_bar at the linearization point
};

/// Linearizes the OCP at iterate `w`: evaluates all StageQpData blocks, with
/// the Hessian assembled according to `mode` (exact Hessians contract
/// w.lam / w.mu against the constraint curvature). Throws EvaluationError
/// with the stage index on non-finite values.
StageQpData linearize_at(const OcpDefinition& ocp, const Iterate& w,
                         const Vector& theta, const HessianMode& mode);

/// Derivative of the stacked smoothed-KKT residual with respect to theta at
/// the iterate `w`; shape n_w x n_theta with rows in iterate order
/// (stationarity, equality, inequality, complementarity). The
/// complementarity rows are identically zero: the smoothing term `tau` does
/// not depend on theta, which is also why `tau` itself does not appear in
/// the result.
Matrix eval_param_jacobian(const OcpDefinition& ocp, const Iterate& w,
                           const Vector& theta, double tau);

/// One classical explicit fourth-order Runge-Kutta step of size dt for
/// x' = rhs(x, u, theta) with u, theta held constant over the step.
template <typename T, typename F>
VecX<T> rk4_step(F&& rhs, const VecX<T>& x, const VecX<T>& u,
                 const VecX<T>& theta, double dt) {
  VecX<T> k1 = rhs(x, u, theta);
  VecX<T> k2 = rhs(VecX<T>(x + (0.5 * dt) * k1), u, theta);
  VecX<T> k3 = rhs(VecX<T>(x + (0.5 * dt) * k2), u, theta);
  VecX<T> k4 = rhs(VecX<T>(x + dt * k3), u, theta);
  return x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

/// Dense NLP view of an OCP: flattens the stage structure into the generic
/// NlpFunctions interface (used for residual evaluation and oracles; the
/// solvers keep the structure).
class OcpNlpAdapter : public NlpFunctions {
 public:
  explicit OcpNlpAdapter(const OcpDefinition& ocp)
      : ocp_(&ocp), layout_(ocp.dims) {}

  Eigen::Index num_vars() const override { return ocp_->dims.n_z(); }
  Eigen::Index num_eq() const override { return ocp_->dims.n_g(); }
  Eigen::Index num_ineq() const override { return ocp_->dims.n_ineq(); }
  Eigen::Index num_params() const override { return ocp_->dims.n_theta; }

  double objective(const Vector& z, const Vector& theta) const override;
  Vector objective_grad(const Vector& z, const Vector& theta) const override;
  Vector eq_constraints(const Vector& z, const Vector& theta) const override;
  Vector ineq_constraints(const Vector& z,
                          const Vector& theta) const override;
  Vector eq_jac_tmul(const Vector& z, const Vector& theta,
                     const Vector& lam) const override;
  Vector ineq_jac_tmul(const Vector& z, const Vector& theta,
                       const Vector& mu) const override;

  const TrajectoryLayout& layout() const { return layout_; }

 private:
  const OcpDefinition* ocp_;
  TrajectoryLayout layout_;
};

}  // namespace ocpsens
