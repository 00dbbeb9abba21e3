// Copyright (C) 2026 the ocpsens authors
// SPDX-License-Identifier: Apache-2.0
#include "ocpsens/ocp.hpp"

#include <stdexcept>
#include <string>

namespace ocpsens {

namespace {

/// Stage variable (x_n, u_n) as one vector.
Vector stage_vars(const TrajectoryLayout& lay, const Vector& z, int n) {
  return z.segment(lay.x_offset(n), lay.dims.n_x + lay.dims.n_u);
}

/// Stage Lagrangian density psi(v; theta) = L_n + lam_next' f_n + mu_n' h_n
/// evaluated on (possibly nested) duals; lam_next and mu_n enter as plain
/// double coefficients.
template <typename T>
T stage_lagrangian(const StageFunctions<T>& fns, const OcpDimensions& dims,
                   int n, const VecX<T>& x, const VecX<T>& u,
                   const VecX<T>& th, const Vector& lam_next,
                   const Vector& mu_n) {
  T acc = fns.stage_cost(n, x, u, th);
  if (dims.n_x > 0) {
    VecX<T> f = fns.dynamics(n, x, u, th);
    for (Eigen::Index i = 0; i < f.size(); ++i) acc += lam_next[i] * f[i];
  }
  if (dims.n_h > 0) {
    VecX<T> h = fns.path_ineq(n, x, u, th);
    for (Eigen::Index i = 0; i < h.size(); ++i) acc += mu_n[i] * h[i];
  }
  return acc;
}

/// Terminal counterpart psi_N(x; theta) = M + mu_N' h_N.
template <typename T>
T terminal_lagrangian(const StageFunctions<T>& fns, const OcpDimensions& dims,
                      const VecX<T>& x, const VecX<T>& th,
                      const Vector& mu_term) {
  T acc = fns.terminal_cost(x, th);
  if (dims.n_h_N > 0) {
    VecX<T> h = fns.terminal_ineq(x, th);
    for (Eigen::Index i = 0; i < h.size(); ++i) acc += mu_term[i] * h[i];
  }
  return acc;
}

void require_finite(bool ok, const char* what, int stage) {
  if (!ok) {
    throw EvaluationError(std::string("non-finite ") + what, stage);
  }
}

}  // namespace

void OcpDimensions::validate() const {
  if (N < 1) throw std::invalid_argument("horizon N must be >= 1");
  if (n_x < 0 || n_u < 0 || n_h < 0 || n_h_N < 0 || n_theta < 0) {
    throw std::invalid_argument("negative dimension");
  }
  if (n_x + n_u == 0) {
    throw std::invalid_argument("stage variable dimension n_x + n_u is zero");
  }
  if (n_x == 0 && n_h_N > 0) {
    throw std::invalid_argument("terminal constraints require n_x > 0");
  }
}

StageQpData linearize_at(const OcpDefinition& ocp, const Iterate& w,
                         const Vector& theta, const HessianMode& mode) {
  const OcpDimensions& dims = ocp.dims;
  const TrajectoryLayout lay(dims);
  const int n_x = dims.n_x;
  const int n_u = dims.n_u;
  const int n_v = n_x + n_u;

  StageQpData qp;
  qp.dims = dims;
  qp.mode = mode;
  qp.Q.resize(dims.N);
  qp.q.resize(dims.N);
  qp.A.resize(dims.N);
  qp.B.resize(dims.N);
  qp.b.resize(dims.N);
  qp.C.resize(dims.N);
  qp.D.resize(dims.N);
  qp.h.resize(dims.N);

  const StageFunctions<double>& val = ocp.f_val;
  const StageFunctions<Dual1>& jac = ocp.f_jac;
  const StageFunctions<Dual2>& hes = ocp.f_hess;

  const VecX<Dual1> th1 = lift<Dual1>(theta);
  const VecX<Dual2> th2 = lift<Dual2>(theta);

  for (int n = 0; n < dims.N; ++n) {
    const Vector v = stage_vars(lay, w.z, n);
    const Vector x = v.head(n_x);
    const Vector u = v.tail(n_u);
    const Vector lam_next =
        n_x > 0 ? Vector(w.lam.segment(lay.eq_dyn_row(n), n_x)) : Vector();
    const Vector mu_n =
        dims.n_h > 0 ? Vector(w.mu.segment(lay.ineq_stage_row(n), dims.n_h))
                     : Vector();

    // Cost gradient over (x, u).
    qp.q[n] = gradient(
        [&](const VecX<Dual1>& vd) {
          return jac.stage_cost(n, VecX<Dual1>(vd.head(n_x)),
                                VecX<Dual1>(vd.tail(n_u)), th1);
        },
        v);
    require_finite(qp.q[n].allFinite(), "cost gradient", n);

    // Dynamics value and Jacobian.
    if (n_x > 0) {
      Vector f_value = val.dynamics(n, x, u, theta);
      require_finite(f_value.allFinite(), "dynamics value", n);
      qp.b[n] = f_value - w.z.segment(lay.x_offset(n + 1), n_x);
      Matrix fj = jacobian(
          [&](const VecX<Dual1>& vd) {
            return jac.dynamics(n, VecX<Dual1>(vd.head(n_x)),
                                VecX<Dual1>(vd.tail(n_u)), th1);
          },
          v, n_x);
      require_finite(fj.allFinite(), "dynamics Jacobian", n);
      qp.A[n] = fj.leftCols(n_x);
      qp.B[n] = fj.rightCols(n_u);
    } else {
      qp.b[n] = Vector();
      qp.A[n] = Matrix(0, 0);
      qp.B[n] = Matrix(0, n_u);
    }

    // Path-constraint values and Jacobian.
    if (dims.n_h > 0) {
      qp.h[n] = val.path_ineq(n, x, u, theta);
      require_finite(qp.h[n].allFinite(), "path-constraint value", n);
      Matrix hj = jacobian(
          [&](const VecX<Dual1>& vd) {
            return jac.path_ineq(n, VecX<Dual1>(vd.head(n_x)),
                                 VecX<Dual1>(vd.tail(n_u)), th1);
          },
          v, dims.n_h);
      require_finite(hj.allFinite(), "path-constraint Jacobian", n);
      qp.C[n] = hj.leftCols(n_x);
      qp.D[n] = hj.rightCols(n_u);
    } else {
      qp.h[n] = Vector();
      qp.C[n] = Matrix(0, n_x);
      qp.D[n] = Matrix(0, n_u);
    }

    // Hessian block: full stage Lagrangian in Exact mode, cost only in
    // GaussNewton mode.
    Matrix Qn;
    if (mode.kind == HessianMode::Kind::Exact) {
      Qn = hessian(
          [&](const VecX<Dual2>& vd) {
            return stage_lagrangian(hes, dims, n, VecX<Dual2>(vd.head(n_x)),
                                    VecX<Dual2>(vd.tail(n_u)), th2, lam_next,
                                    mu_n);
          },
          v);
    } else {
      Qn = hessian(
          [&](const VecX<Dual2>& vd) {
            return hes.stage_cost(n, VecX<Dual2>(vd.head(n_x)),
                                  VecX<Dual2>(vd.tail(n_u)), th2);
          },
          v);
    }
    require_finite(Qn.allFinite(), "Hessian block", n);
    qp.Q[n] = 0.5 * (Qn + Qn.transpose());
    if (mode.levenberg_marquardt != 0.0) {
      qp.Q[n] += mode.levenberg_marquardt * Matrix::Identity(n_v, n_v);
    }
  }

  // Terminal blocks.
  {
    const Vector xN = w.z.segment(lay.x_offset(dims.N), n_x);
    const Vector mu_term =
        dims.n_h_N > 0
            ? Vector(w.mu.segment(lay.ineq_terminal_row(), dims.n_h_N))
            : Vector();
    qp.q_term = gradient(
        [&](const VecX<Dual1>& xd) { return jac.terminal_cost(xd, th1); },
        xN);
    require_finite(qp.q_term.allFinite(), "terminal cost gradient", dims.N);
    if (dims.n_h_N > 0) {
      qp.h_term = val.terminal_ineq(xN, theta);
      require_finite(qp.h_term.allFinite(), "terminal-constraint value",
                     dims.N);
      qp.C_term = jacobian(
          [&](const VecX<Dual1>& xd) { return jac.terminal_ineq(xd, th1); },
          xN, dims.n_h_N);
      require_finite(qp.C_term.allFinite(), "terminal-constraint Jacobian",
                     dims.N);
    } else {
      qp.h_term = Vector();
      qp.C_term = Matrix(0, n_x);
    }
    Matrix QN;
    if (mode.kind == HessianMode::Kind::Exact) {
      QN = hessian(
          [&](const VecX<Dual2>& xd) {
            return terminal_lagrangian(hes, dims, xd, th2, mu_term);
          },
          xN);
    } else {
      QN = hessian(
          [&](const VecX<Dual2>& xd) { return hes.terminal_cost(xd, th2); },
          xN);
    }
    require_finite(QN.allFinite(), "terminal Hessian", dims.N);
    qp.Q_term = 0.5 * (QN + QN.transpose());
    if (mode.levenberg_marquardt != 0.0) {
      qp.Q_term += mode.levenberg_marquardt * Matrix::Identity(n_x, n_x);
    }
    qp.r_init = w.z.head(n_x) - ocp.initial_state(theta);
  }
  return qp;
}

Matrix eval_param_jacobian(const OcpDefinition& ocp, const Iterate& w,
                           const Vector& theta, double tau) {
  (void)tau;  // the smoothing offset has no theta dependence
  const OcpDimensions& dims = ocp.dims;
  const TrajectoryLayout lay(dims);
  const int n_x = dims.n_x;
  const int n_u = dims.n_u;
  const Eigen::Index n_z = dims.n_z();
  const Eigen::Index n_g = dims.n_g();
  const Eigen::Index n_ineq = dims.n_ineq();

  Matrix J = Matrix::Zero(dims.n_w(), dims.n_theta);
  const Eigen::Index eq_base = n_z;
  const Eigen::Index ineq_base = n_z + n_g;

  const StageFunctions<Dual1>& jac = ocp.f_jac;
  const StageFunctions<Dual2>& hes = ocp.f_hess;

  for (int n = 0; n < dims.N; ++n) {
    const Vector v = stage_vars(lay, w.z, n);
    const Vector x = v.head(n_x);
    const Vector u = v.tail(n_u);
    const Vector lam_next =
        n_x > 0 ? Vector(w.lam.segment(lay.eq_dyn_row(n), n_x)) : Vector();
    const Vector mu_n =
        dims.n_h > 0 ? Vector(w.mu.segment(lay.ineq_stage_row(n), dims.n_h))
                     : Vector();

    // Stationarity rows of stage n.
    Matrix stat;
    if (ocp.stat_param_jac) {
      stat = ocp.stat_param_jac(n, x, u, theta, lam_next, mu_n);
    } else {
      stat = cross_derivative(
          [&](const VecX<Dual2>& vd, const VecX<Dual2>& td) {
            return stage_lagrangian(hes, dims, n, VecX<Dual2>(vd.head(n_x)),
                                    VecX<Dual2>(vd.tail(n_u)), td, lam_next,
                                    mu_n);
          },
          v, theta);
    }
    require_finite(stat.allFinite(), "stationarity parameter Jacobian", n);
    J.middleRows(lay.x_offset(n), n_x + n_u) = stat;

    // Dynamics rows.
    if (n_x > 0) {
      Matrix dyn;
      if (ocp.dyn_param_jac) {
        dyn = ocp.dyn_param_jac(n, x, u, theta);
      } else {
        const VecX<Dual1> x1 = lift<Dual1>(x);
        const VecX<Dual1> u1 = lift<Dual1>(u);
        dyn = jacobian(
            [&](const VecX<Dual1>& td) { return jac.dynamics(n, x1, u1, td); },
            theta, n_x);
      }
      require_finite(dyn.allFinite(), "dynamics parameter Jacobian", n);
      J.middleRows(eq_base + lay.eq_dyn_row(n), n_x) = dyn;
    }

    // Path-constraint rows.
    if (dims.n_h > 0) {
      Matrix ineq;
      if (ocp.ineq_param_jac) {
        ineq = ocp.ineq_param_jac(n, x, u, theta);
      } else {
        const VecX<Dual1> x1 = lift<Dual1>(x);
        const VecX<Dual1> u1 = lift<Dual1>(u);
        ineq = jacobian(
            [&](const VecX<Dual1>& td) {
              return jac.path_ineq(n, x1, u1, td);
            },
            theta, dims.n_h);
      }
      require_finite(ineq.allFinite(), "constraint parameter Jacobian", n);
      J.middleRows(ineq_base + lay.ineq_stage_row(n), dims.n_h) = ineq;
    }
  }

  // Terminal stationarity rows.
  {
    const Vector xN = w.z.segment(lay.x_offset(dims.N), n_x);
    const Vector mu_term =
        dims.n_h_N > 0
            ? Vector(w.mu.segment(lay.ineq_terminal_row(), dims.n_h_N))
            : Vector();
    Matrix stat;
    if (ocp.stat_param_jac_terminal) {
      stat = ocp.stat_param_jac_terminal(xN, theta, mu_term);
    } else {
      stat = cross_derivative(
          [&](const VecX<Dual2>& xd, const VecX<Dual2>& td) {
            return terminal_lagrangian(hes, dims, xd, td, mu_term);
          },
          xN, theta);
    }
    require_finite(stat.allFinite(), "terminal stationarity Jacobian",
                   dims.N);
    J.middleRows(lay.x_offset(dims.N), n_x) = stat;

    if (dims.n_h_N > 0) {
      Matrix ineq;
      if (ocp.ineq_param_jac_terminal) {
        ineq = ocp.ineq_param_jac_terminal(xN, theta);
      } else {
        const VecX<Dual1> x1 = lift<Dual1>(xN);
        ineq = jacobian(
            [&](const VecX<Dual1>& td) { return jac.terminal_ineq(x1, td); },
            theta, dims.n_h_N);
      }
      require_finite(ineq.allFinite(), "terminal-constraint Jacobian",
                     dims.N);
      J.middleRows(ineq_base + lay.ineq_terminal_row(), dims.n_h_N) = ineq;
    }
  }

  // Initial-state rows: -d x0_bar / d theta.
  if (ocp.x0_param_offset >= 0) {
    for (int i = 0; i < n_x; ++i) {
      J(eq_base + i, ocp.x0_param_offset + i) = -1.0;
    }
  }
  // Complementarity rows stay zero.
  return J;
}

double OcpNlpAdapter::objective(const Vector& z, const Vector& theta) const {
  const OcpDimensions& dims = ocp_->dims;
  const StageFunctions<double>& val = ocp_->f_val;
  double acc = 0.0;
  for (int n = 0; n < dims.N; ++n) {
    acc += val.stage_cost(n, z.segment(layout_.x_offset(n), dims.n_x),
                          z.segment(layout_.u_offset(n), dims.n_u), theta);
  }
  acc += val.terminal_cost(z.segment(layout_.x_offset(dims.N), dims.n_x),
                           theta);
  return acc;
}

Vector OcpNlpAdapter::objective_grad(const Vector& z,
                                     const Vector& theta) const {
  const OcpDimensions& dims = ocp_->dims;
  const StageFunctions<Dual1>& jac = ocp_->f_jac;
  const VecX<Dual1> th1 = lift<Dual1>(theta);
  Vector g = Vector::Zero(dims.n_z());
  for (int n = 0; n < dims.N; ++n) {
    const Vector v = stage_vars(layout_, z, n);
    g.segment(layout_.x_offset(n), dims.n_x + dims.n_u) = gradient(
        [&](const VecX<Dual1>& vd) {
          return jac.stage_cost(n, VecX<Dual1>(vd.head(dims.n_x)),
                                VecX<Dual1>(vd.tail(dims.n_u)), th1);
        },
        v);
  }
  const Vector xN = z.segment(layout_.x_offset(dims.N), dims.n_x);
  g.segment(layout_.x_offset(dims.N), dims.n_x) = gradient(
      [&](const VecX<Dual1>& xd) { return jac.terminal_cost(xd, th1); }, xN);
  return g;
}

Vector OcpNlpAdapter::eq_constraints(const Vector& z,
                                     const Vector& theta) const {
  const OcpDimensions& dims = ocp_->dims;
  const StageFunctions<double>& val = ocp_->f_val;
  Vector g(dims.n_g());
  if (dims.n_x > 0) {
    g.head(dims.n_x) = z.head(dims.n_x) - ocp_->initial_state(theta);
    for (int n = 0; n < dims.N; ++n) {
      g.segment(layout_.eq_dyn_row(n), dims.n_x) =
          val.dynamics(n, z.segment(layout_.x_offset(n), dims.n_x),
                       z.segment(layout_.u_offset(n), dims.n_u), theta) -
          z.segment(layout_.x_offset(n + 1), dims.n_x);
    }
  }
  return g;
}

Vector OcpNlpAdapter::ineq_constraints(const Vector& z,
                                       const Vector& theta) const {
  const OcpDimensions& dims = ocp_->dims;
  const StageFunctions<double>& val = ocp_->f_val;
  Vector h(dims.n_ineq());
  for (int n = 0; n < dims.N; ++n) {
    if (dims.n_h > 0) {
      h.segment(layout_.ineq_stage_row(n), dims.n_h) =
          val.path_ineq(n, z.segment(layout_.x_offset(n), dims.n_x),
                        z.segment(layout_.u_offset(n), dims.n_u), theta);
    }
  }
  if (dims.n_h_N > 0) {
    h.segment(layout_.ineq_terminal_row(), dims.n_h_N) = val.terminal_ineq(
        z.segment(layout_.x_offset(dims.N), dims.n_x), theta);
  }
  return h;
}

Vector OcpNlpAdapter::eq_jac_tmul(const Vector& z, const Vector& theta,
                                  const Vector& lam) const {
  const OcpDimensions& dims = ocp_->dims;
  const StageFunctions<Dual1>& jac = ocp_->f_jac;
  const VecX<Dual1> th1 = lift<Dual1>(theta);
  Vector out = Vector::Zero(dims.n_z());
  if (dims.n_x == 0) return out;
  out.head(dims.n_x) += lam.head(dims.n_x);
  for (int n = 0; n < dims.N; ++n) {
    const Vector v = stage_vars(layout_, z, n);
    const Vector lam_next = lam.segment(layout_.eq_dyn_row(n), dims.n_x);
    // grad_v of lam_next' f_n(v): one scalar contraction per direction.
    out.segment(layout_.x_offset(n), dims.n_x + dims.n_u) += gradient(
        [&](const VecX<Dual1>& vd) {
          VecX<Dual1> f = jac.dynamics(n, VecX<Dual1>(vd.head(dims.n_x)),
                                       VecX<Dual1>(vd.tail(dims.n_u)), th1);
          Dual1 acc(0.0);
          for (Eigen::Index i = 0; i < f.size(); ++i) {
            acc += lam_next[i] * f[i];
          }
          return acc;
        },
        v);
    out.segment(layout_.x_offset(n + 1), dims.n_x) -= lam_next;
  }
  return out;
}

Vector OcpNlpAdapter::ineq_jac_tmul(const Vector& z, const Vector& theta,
                                    const Vector& mu) const {
  const OcpDimensions& dims = ocp_->dims;
  const StageFunctions<Dual1>& jac = ocp_->f_jac;
  const VecX<Dual1> th1 = lift<Dual1>(theta);
  Vector out = Vector::Zero(dims.n_z());
  for (int n = 0; n < dims.N && dims.n_h > 0; ++n) {
    const Vector v = stage_vars(layout_, z, n);
    const Vector mu_n = mu.segment(layout_.ineq_stage_row(n), dims.n_h);
    out.segment(layout_.x_offset(n), dims.n_x + dims.n_u) += gradient(
        [&](const VecX<Dual1>& vd) {
          VecX<Dual1> h = jac.path_ineq(n, VecX<Dual1>(vd.head(dims.n_x)),
                                        VecX<Dual1>(vd.tail(dims.n_u)), th1);
          Dual1 acc(0.0);
          for (Eigen::Index i = 0; i < h.size(); ++i) acc += mu_n[i] * h[i];
          return acc;
        },
        v);
  }
  if (dims.n_h_N > 0) {
    const Vector xN = z.segment(layout_.x_offset(dims.N), dims.n_x);
    const Vector mu_term = mu.segment(layout_.ineq_terminal_row(), dims.n_h_N);
    out.segment(layout_.x_offset(dims.N), dims.n_x) += gradient(
        [&](const VecX<Dual1>& xd) {
          VecX<Dual1> h = jac.terminal_ineq(xd, th1);
          Dual1 acc(0.0);
          for (Eigen::Index i = 0; i < h.size(); ++i) {
            acc += mu_term[i] * h[i];
          }
          return acc;
        },
        xN);
  }
  return out;
}

}  // namespace ocpsens
