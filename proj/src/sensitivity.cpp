// Copyright (C) 2026 the ocpsens authors
// SPDX-License-Identifier: Apache-2.0
#include "ocpsens/sensitivity.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <utility>

#include <Eigen/LU>

#include "ocpsens/errors.hpp"
#include "ocpsens/nlp.hpp"

namespace ocpsens {

namespace {

constexpr double kSlackClamp = 1e-14;
constexpr double kDegenerateMargin = 1e-6;
constexpr double kActiveTol = 1e-6;

SensitivityWorkspace build_workspace(const OcpDefinition& ocp,
                                     const SolveResult& result,
                                     const Vector& theta, double tau_min,
                                     const HessianMode& mode) {
  if (result.status != SolveStatus::Converged) {
    throw std::invalid_argument(
        "sensitivity setup requires a converged solve");
  }
  SensitivityWorkspace ws;
  ws.ocp = &ocp;
  ws.w = result.w;
  ws.theta = theta;
  ws.tau_min = tau_min;
  ws.qp = linearize_at(ocp, result.w, theta, mode);
  const Vector s_cl = result.w.s.cwiseMax(kSlackClamp);
  ws.weights = BarrierWeights::from(result.w.mu, s_cl);
  ws.fact = riccati_factorize(assemble_reduced(ws.qp, result.w.mu, s_cl));
  ws.diagnostics = strict_complementarity_margin(result.w);
  ws.diagnostics.hessian_inertia_ok = ws.fact.inertia_ok;
  ws.degenerate = ws.diagnostics.strict_comp_margin < kDegenerateMargin;
  return ws;
}

/// Stage-wise accumulation of H' * diag(d) * M into the stationarity rows
/// of a multi-column right-hand side, plus direct copies of the other
/// blocks. Mirrors reduce_residual for matrix-valued residuals.
void reduce_columns(const StageQpData& qp, const BarrierWeights& bw,
                    const Matrix& Jz, const Matrix& Jlam, const Matrix& Jmu,
                    Matrix* rhs_z, Matrix* rhs_lam) {
  const OcpDimensions& dims = qp.dims;
  const TrajectoryLayout lay(dims);
  *rhs_z = Jz;
  for (int n = 0; n < dims.N && dims.n_h > 0; ++n) {
    const auto d = bw.d.segment(lay.ineq_stage_row(n), dims.n_h);
    const Matrix W = d.asDiagonal() * Jmu.middleRows(lay.ineq_stage_row(n),
                                                     dims.n_h);
    rhs_z->middleRows(lay.x_offset(n), dims.n_x).noalias() +=
        qp.C[n].transpose() * W;
    rhs_z->middleRows(lay.u_offset(n), dims.n_u).noalias() +=
        qp.D[n].transpose() * W;
  }
  if (dims.n_h_N > 0) {
    const auto d = bw.d.segment(lay.ineq_terminal_row(), dims.n_h_N);
    const Matrix W =
        d.asDiagonal() * Jmu.middleRows(lay.ineq_terminal_row(), dims.n_h_N);
    rhs_z->middleRows(lay.x_offset(dims.N), dims.n_x).noalias() +=
        qp.C_term.transpose() * W;
  }
  *rhs_lam = Jlam;
}

/// H * dz for every column of a matrix, stage-wise.
Matrix ineq_mul_columns(const StageQpData& qp, const Matrix& dz) {
  const OcpDimensions& dims = qp.dims;
  const TrajectoryLayout lay(dims);
  Matrix out(dims.n_ineq(), dz.cols());
  for (int n = 0; n < dims.N && dims.n_h > 0; ++n) {
    out.middleRows(lay.ineq_stage_row(n), dims.n_h) =
        qp.C[n] * dz.middleRows(lay.x_offset(n), dims.n_x) +
        qp.D[n] * dz.middleRows(lay.u_offset(n), dims.n_u);
  }
  if (dims.n_h_N > 0) {
    out.middleRows(lay.ineq_terminal_row(), dims.n_h_N) =
        qp.C_term * dz.middleRows(lay.x_offset(dims.N), dims.n_x);
  }
  return out;
}

}  // namespace

SensitivityWorkspace setup_and_factorize(const OcpDefinition& ocp,
                                         const SolveResult& result,
                                         const Vector& theta,
                                         double tau_min) {
  return build_workspace(ocp, result, theta, tau_min, HessianMode::exact());
}

SensitivityWorkspace setup_with_hessian_mode(const OcpDefinition& ocp,
                                             const SolveResult& result,
                                             const Vector& theta,
                                             double tau_min,
                                             const HessianMode& mode) {
  return build_workspace(ocp, result, theta, tau_min, mode);
}

ForwardSensitivities forward(const SensitivityWorkspace& ws,
                             const std::vector<int>& param_indices) {
  const OcpDefinition& ocp = *ws.ocp;
  const OcpDimensions& dims = ocp.dims;
  const Eigen::Index n_z = dims.n_z();
  const Eigen::Index n_g = dims.n_g();
  const Eigen::Index n_h = dims.n_ineq();

  const Matrix J = eval_param_jacobian(ocp, ws.w, ws.theta, ws.tau_min);
  const Eigen::Index k = Eigen::Index(param_indices.size());
  Matrix Jz(n_z, k), Jlam(n_g, k), Jmu(n_h, k);
  for (Eigen::Index c = 0; c < k; ++c) {
    const int j = param_indices[size_t(c)];
    if (j < 0 || j >= J.cols()) {
      throw std::invalid_argument("parameter index out of range");
    }
    Jz.col(c) = J.col(j).head(n_z);
    Jlam.col(c) = J.col(j).segment(n_z, n_g);
    Jmu.col(c) = J.col(j).segment(n_z + n_g, n_h);
  }

  // dw/dtheta solves M dw = -J. The reduced solver already negates its
  // right-hand side, so pass the reduced J columns directly; the
  // complementarity rows of J are identically zero.
  Matrix rhs_z, rhs_lam, dz, dlam;
  reduce_columns(ws.qp, ws.weights, Jz, Jlam, Jmu, &rhs_z, &rhs_lam);
  riccati_solve(ws.fact, rhs_z, rhs_lam, &dz, &dlam);

  const Matrix hdz = ineq_mul_columns(ws.qp, dz);
  const Matrix ds = -Jmu - hdz;
  // The complementarity rows of J vanish, so dmu = -S^{-1} M ds.
  const Matrix dmu = -(ws.weights.d.asDiagonal() * ds);

  ForwardSensitivities out;
  out.param_indices = param_indices;
  out.n_z = n_z;
  out.n_g = n_g;
  out.n_h = n_h;
  out.columns.resize(dims.n_w(), k);
  out.columns.topRows(n_z) = dz;
  out.columns.middleRows(n_z, n_g) = dlam;
  out.columns.middleRows(n_z + n_g, n_h) = dmu;
  out.columns.bottomRows(n_h) = ds;
  return out;
}

ForwardSensitivities forward(const SensitivityWorkspace& ws) {
  std::vector<int> all(size_t(ws.ocp->dims.n_theta));
  std::iota(all.begin(), all.end(), 0);
  return forward(ws, all);
}

AdjointResult adjoint(const SensitivityWorkspace& ws,
                      const AdjointSeed& seed) {
  const OcpDefinition& ocp = *ws.ocp;
  const OcpDimensions& dims = ocp.dims;
  if (seed.nu.z.size() != dims.n_z() || seed.nu.lam.size() != dims.n_g() ||
      seed.nu.mu.size() != dims.n_ineq() ||
      seed.nu.s.size() != dims.n_ineq()) {
    throw std::invalid_argument("adjoint seed has wrong dimensions");
  }
  const PrimalDualStep x = solve_transpose(ws.fact, ws.qp, ws.weights,
                                           seed.nu);
  Vector xs(dims.n_w());
  xs << x.dz, x.dlam, x.dmu, x.ds;
  const Matrix J = eval_param_jacobian(ocp, ws.w, ws.theta, ws.tau_min);
  AdjointResult out;
  out.s_adj = -J.transpose() * xs;
  return out;
}

ActiveSetSensitivities active_set_sensitivity_oracle(
    const OcpDefinition& ocp, const SolveResult& result,
    const Vector& theta) {
  if (result.status != SolveStatus::Converged) {
    throw std::invalid_argument(
        "active-set oracle requires a converged solve");
  }
  const OcpDimensions& dims = ocp.dims;
  const Eigen::Index n_z = dims.n_z();
  const Eigen::Index n_g = dims.n_g();
  const Eigen::Index n_h = dims.n_ineq();

  const StageQpData qp =
      linearize_at(ocp, result.w, theta, HessianMode::exact());
  Matrix Qd, G, Hd;
  Vector qd, g, hd;
  densify(qp, &Qd, &qd, &G, &g, &Hd, &hd);

  ActiveSetSensitivities out;
  for (Eigen::Index i = 0; i < n_h; ++i) {
    const double mu = result.w.mu[i];
    const double h = hd[i];
    if (mu > kActiveTol && std::abs(h) < kActiveTol) {
      out.active_rows.push_back(int(i));
    } else if (!(mu <= kActiveTol && h < -kActiveTol)) {
      throw DiagnosticsError(
          "inequality neither clearly active nor clearly inactive");
    }
  }
  const Eigen::Index n_a = Eigen::Index(out.active_rows.size());
  Matrix Ha(n_a, n_z);
  for (Eigen::Index r = 0; r < n_a; ++r) {
    Ha.row(r) = Hd.row(out.active_rows[size_t(r)]);
  }

  const Eigen::Index n_k = n_z + n_g + n_a;
  Matrix K = Matrix::Zero(n_k, n_k);
  K.topLeftCorner(n_z, n_z) = Qd;
  K.block(0, n_z, n_z, n_g) = G.transpose();
  K.block(0, n_z + n_g, n_z, n_a) = Ha.transpose();
  K.block(n_z, 0, n_g, n_z) = G;
  K.block(n_z + n_g, 0, n_a, n_z) = Ha;

  const Matrix J = eval_param_jacobian(ocp, result.w, theta, 0.0);
  Matrix Jred(n_k, J.cols());
  Jred.topRows(n_z) = J.topRows(n_z);
  Jred.middleRows(n_z, n_g) = J.middleRows(n_z, n_g);
  for (Eigen::Index r = 0; r < n_a; ++r) {
    Jred.row(n_z + n_g + r) = J.row(n_z + n_g + out.active_rows[size_t(r)]);
  }

  Eigen::FullPivLU<Matrix> lu(K);
  if (!lu.isInvertible()) {
    throw DiagnosticsError(
        "active-set system is singular: constraint gradients are dependent "
        "or curvature degenerates on the critical cone");
  }
  out.rows = -lu.solve(Jred);
  out.n_z = n_z;
  out.n_g = n_g;
  return out;
}

Matrix finite_difference_oracle(const OcpDefinition& ocp, const Vector& theta,
                                const SqpSettings& settings, double h_rel,
                                const std::optional<SolveResult>& base) {
  SolveResult b;
  if (base) {
    b = *base;
  } else {
    b = solve_nlp(ocp, theta, {}, settings);
  }
  if (b.status != SolveStatus::Converged) {
    throw OracleError("finite differences: base solve did not converge");
  }
  const Eigen::Index n_w = ocp.dims.n_w();
  Matrix out(n_w, theta.size());
  for (Eigen::Index j = 0; j < theta.size(); ++j) {
    const double h = h_rel * std::max(1.0, std::abs(theta[j]));
    Vector tp = theta, tm = theta;
    tp[j] += h;
    tm[j] -= h;
    const SolveResult rp = solve_nlp(ocp, tp, b.w, settings);
    const SolveResult rm = solve_nlp(ocp, tm, b.w, settings);
    if (rp.status != SolveStatus::Converged ||
        rm.status != SolveStatus::Converged) {
      throw OracleError("finite differences: perturbed solve did not converge");
    }
    out.col(j) = (rp.w.stacked() - rm.w.stacked()) / (2.0 * h);
  }
  return out;
}

TwoSolverOutput two_solver_solve_and_sensitivity(
    const OcpDefinition& ocp, const Vector& theta,
    const SqpSettings& nominal_settings, const SensitivityRequest& request,
    const std::optional<Iterate>& init) {
  TwoSolverOutput out;
  out.nominal = solve_nlp(ocp, theta, init, nominal_settings);
  if (out.nominal.status != SolveStatus::Converged ||
      request.kind == SensitivityRequest::Kind::None) {
    return out;
  }
  const SensitivityWorkspace ws =
      setup_and_factorize(ocp, out.nominal, theta, nominal_settings.tau_min());
  switch (request.kind) {
    case SensitivityRequest::Kind::Forward:
      if (request.param_indices.empty()) {
        out.forward = forward(ws);
      } else {
        out.forward = forward(ws, request.param_indices);
      }
      break;
    case SensitivityRequest::Kind::Adjoint:
      if (!request.seed) {
        throw std::invalid_argument("adjoint request without a seed");
      }
      out.adjoint = adjoint(ws, *request.seed);
      break;
    case SensitivityRequest::Kind::None:
      break;
  }
  return out;
}

}  // namespace ocpsens
