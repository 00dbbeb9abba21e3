// Copyright (C) 2026 the ocpsens authors
// SPDX-License-Identifier: Apache-2.0
#include "ocpsens/riccati.hpp"

#include <algorithm>
#include <stdexcept>

#include <Eigen/LU>

#include "ocpsens/errors.hpp"

namespace ocpsens {

namespace {

constexpr double kPivotRel = 1e-12;
constexpr Eigen::Index kPanel = 16;
constexpr Eigen::Index kDenseGuard = 2000;

/// Applies H' * diag(coef) stage-wise: out_z += [C D]' coef_n per stage plus
/// the terminal C' coef_N rows. `coef` has one entry per inequality row.
void add_ineq_tmul(const StageQpData& qp, const Vector& coef, Vector* out_z) {
  const OcpDimensions& dims = qp.dims;
  const TrajectoryLayout lay(dims);
  for (int n = 0; n < dims.N; ++n) {
    if (dims.n_h == 0) break;
    const auto c = coef.segment(lay.ineq_stage_row(n), dims.n_h);
    out_z->segment(lay.x_offset(n), dims.n_x) += qp.C[n].transpose() * c;
    out_z->segment(lay.u_offset(n), dims.n_u) += qp.D[n].transpose() * c;
  }
  if (dims.n_h_N > 0) {
    const auto c = coef.segment(lay.ineq_terminal_row(), dims.n_h_N);
    out_z->segment(lay.x_offset(dims.N), dims.n_x) +=
        qp.C_term.transpose() * c;
  }
}

/// Evaluates H * dz stage-wise into a vector over the inequality rows.
Vector ineq_mul(const StageQpData& qp, const Vector& dz) {
  const OcpDimensions& dims = qp.dims;
  const TrajectoryLayout lay(dims);
  Vector out(dims.n_ineq());
  for (int n = 0; n < dims.N && dims.n_h > 0; ++n) {
    out.segment(lay.ineq_stage_row(n), dims.n_h) =
        qp.C[n] * dz.segment(lay.x_offset(n), dims.n_x) +
        qp.D[n] * dz.segment(lay.u_offset(n), dims.n_u);
  }
  if (dims.n_h_N > 0) {
    out.segment(lay.ineq_terminal_row(), dims.n_h_N) =
        qp.C_term * dz.segment(lay.x_offset(dims.N), dims.n_x);
  }
  return out;
}

}  // namespace

BarrierWeights BarrierWeights::from(const Vector& mu, const Vector& s) {
  if (mu.size() != s.size()) {
    throw std::invalid_argument("barrier weights: mu and s sizes differ");
  }
  for (Eigen::Index i = 0; i < mu.size(); ++i) {
    if (!(mu[i] > 0.0) || !(s[i] > 0.0) || !std::isfinite(mu[i]) ||
        !std::isfinite(s[i])) {
      throw std::invalid_argument(
          "barrier weights require strictly positive finite mu and s");
    }
  }
  BarrierWeights bw;
  bw.mu = mu;
  bw.s = s;
  bw.d = mu.array() / s.array();
  return bw;
}

ReducedKkt assemble_reduced(const StageQpData& qp, const Vector& mu,
                            const Vector& s) {
  const BarrierWeights bw = BarrierWeights::from(mu, s);
  const OcpDimensions& dims = qp.dims;
  const TrajectoryLayout lay(dims);
  ReducedKkt red;
  red.dims = dims;
  red.A = qp.A;
  red.B = qp.B;
  red.Qt.resize(dims.N);
  for (int n = 0; n < dims.N; ++n) {
    red.Qt[n] = qp.Q[n];
    if (dims.n_h > 0) {
      Matrix CD(dims.n_h, dims.n_x + dims.n_u);
      CD << qp.C[n], qp.D[n];
      const auto d = bw.d.segment(lay.ineq_stage_row(n), dims.n_h);
      red.Qt[n].noalias() += CD.transpose() * d.asDiagonal() * CD;
    }
  }
  red.Qt_term = qp.Q_term;
  if (dims.n_h_N > 0) {
    const auto d = bw.d.segment(lay.ineq_terminal_row(), dims.n_h_N);
    red.Qt_term.noalias() +=
        qp.C_term.transpose() * d.asDiagonal() * qp.C_term;
  }
  return red;
}

RiccatiFactorization riccati_factorize(const ReducedKkt& red) {
  const OcpDimensions& dims = red.dims;
  const int n_x = dims.n_x;
  const int n_u = dims.n_u;
  RiccatiFactorization fact;
  fact.dims = dims;
  fact.A = red.A;
  fact.B = red.B;
  fact.P.resize(dims.N + 1);
  fact.F_fac.resize(dims.N);
  fact.K.resize(dims.N);
  fact.H.resize(dims.N);
  fact.P[dims.N] = red.Qt_term;
  for (int n = dims.N - 1; n >= 0; --n) {
    const Matrix& Pn1 = fact.P[n + 1];
    const Matrix& A = red.A[n];
    const Matrix& B = red.B[n];
    const auto Qxx = red.Qt[n].topLeftCorner(n_x, n_x);
    const auto Qux = red.Qt[n].bottomLeftCorner(n_u, n_x);
    const auto Quu = red.Qt[n].bottomRightCorner(n_u, n_u);

    Matrix F = Quu;
    F.noalias() += B.transpose() * Pn1 * B;
    Eigen::LDLT<Matrix> ldlt(F);
    const Vector D = ldlt.vectorD();
    const double scale =
        std::max(1.0, D.size() > 0 ? D.cwiseAbs().maxCoeff() : 1.0);
    bool pd = ldlt.info() == Eigen::Success;
    for (Eigen::Index i = 0; i < D.size() && pd; ++i) {
      pd = D[i] > kPivotRel * scale;
    }
    if (!pd) {
      throw FactorizationError(
          "control-control block is singular or indefinite", n);
    }
    Matrix Hn = Qux;
    Hn.noalias() += B.transpose() * Pn1 * A;
    fact.K[n] = -ldlt.solve(Hn);
    Matrix Pn = Qxx;
    Pn.noalias() += A.transpose() * Pn1 * A;
    Pn.noalias() += Hn.transpose() * fact.K[n];
    fact.P[n] = 0.5 * (Pn + Pn.transpose());
    fact.H[n] = std::move(Hn);
    fact.F_fac[n] = std::move(ldlt);
  }
  return fact;
}

namespace {

/// One backward/forward sweep for a panel of right-hand-side columns,
/// solving  Mt (dz, dlam) = beta  with beta = -(rhs_z, rhs_lam).
void solve_panel(const RiccatiFactorization& fact, const Matrix& rhs_z,
                 const Matrix& rhs_lam, Matrix* dz, Matrix* dlam) {
  const OcpDimensions& dims = fact.dims;
  const TrajectoryLayout lay(dims);
  const int n_x = dims.n_x;
  const int n_u = dims.n_u;

  std::vector<Matrix> p(dims.N + 1);
  std::vector<Matrix> kff(dims.N);

  // Backward sweep for the affine terms.
  p[dims.N] = rhs_z.middleRows(lay.x_offset(dims.N), n_x);  // -beta_xN
  for (int n = dims.N - 1; n >= 0; --n) {
    // t = p_{n+1} - P_{n+1} beta_{lam,n+1}; beta = -rhs.
    Matrix t = p[n + 1];
    t.noalias() +=
        fact.P[n + 1] * rhs_lam.middleRows(lay.eq_dyn_row(n), n_x);
    Matrix ru = -rhs_z.middleRows(lay.u_offset(n), n_u);  // beta_un
    ru.noalias() -= fact.B[n].transpose() * t;
    kff[n] = fact.F_fac[n].solve(ru);
    Matrix pn = rhs_z.middleRows(lay.x_offset(n), n_x);  // -beta_xn
    pn.noalias() += fact.H[n].transpose() * kff[n];
    pn.noalias() += fact.A[n].transpose() * t;
    p[n] = std::move(pn);
  }

  // Forward sweep.
  Matrix x = -rhs_lam.topRows(n_x);  // beta_{lam,0}
  dlam->topRows(n_x) = -(fact.P[0] * x + p[0]);
  dz->middleRows(lay.x_offset(0), n_x) = x;
  for (int n = 0; n < dims.N; ++n) {
    Matrix u = kff[n];
    u.noalias() += fact.K[n] * x;
    dz->middleRows(lay.u_offset(n), n_u) = u;
    Matrix xn = fact.A[n] * x;
    xn.noalias() += fact.B[n] * u;
    xn.noalias() += rhs_lam.middleRows(lay.eq_dyn_row(n), n_x);
    dz->middleRows(lay.x_offset(n + 1), n_x) = xn;
    Matrix lam = p[n + 1];
    lam.noalias() += fact.P[n + 1] * xn;
    dlam->middleRows(lay.eq_dyn_row(n), n_x) = lam;
    x = std::move(xn);
  }
}

}  // namespace

void riccati_solve(const RiccatiFactorization& fact, const Matrix& rhs_z,
                   const Matrix& rhs_lam, Matrix* dz, Matrix* dlam) {
  const OcpDimensions& dims = fact.dims;
  if (rhs_z.rows() != dims.n_z() || rhs_lam.rows() != dims.n_g() ||
      rhs_z.cols() != rhs_lam.cols()) {
    throw std::invalid_argument("riccati_solve: right-hand-side shape");
  }
  const Eigen::Index k = rhs_z.cols();
  dz->resize(dims.n_z(), k);
  dlam->resize(dims.n_g(), k);
  for (Eigen::Index c0 = 0; c0 < k; c0 += kPanel) {
    const Eigen::Index kc = std::min(kPanel, k - c0);
    Matrix dz_p, dlam_p;
    dz_p.resize(dims.n_z(), kc);
    dlam_p.resize(dims.n_g(), kc);
    solve_panel(fact, rhs_z.middleCols(c0, kc), rhs_lam.middleCols(c0, kc),
                &dz_p, &dlam_p);
    dz->middleCols(c0, kc) = dz_p;
    dlam->middleCols(c0, kc) = dlam_p;
  }
  if (k == 0) {
    dz->setZero();
    dlam->setZero();
  }
}

void riccati_solve(const RiccatiFactorization& fact, const Vector& rhs_z,
                   const Vector& rhs_lam, Vector* dz, Vector* dlam) {
  Matrix dz_m, dlam_m;
  riccati_solve(fact, Matrix(rhs_z), Matrix(rhs_lam), &dz_m, &dlam_m);
  *dz = dz_m.col(0);
  *dlam = dlam_m.col(0);
}

void reduce_residual(const StageQpData& qp, const BarrierWeights& bw,
                     const KktResidual& F, Vector* rhs_z, Vector* rhs_lam) {
  *rhs_z = F.stat;
  if (bw.d.size() > 0) {
    // H' S^{-1} (M ineq - comp) = H' (d .* ineq - comp ./ s).
    const Vector coef =
        (bw.d.array() * F.ineq.array() - F.comp.array() / bw.s.array())
            .matrix();
    add_ineq_tmul(qp, coef, rhs_z);
  }
  *rhs_lam = F.eq;
}

PrimalDualStep expand_step(const Vector& dz, const Vector& dlam,
                           const StageQpData& qp, const BarrierWeights& bw,
                           const KktResidual& F) {
  PrimalDualStep step;
  step.dz = dz;
  step.dlam = dlam;
  step.ds = -F.ineq - ineq_mul(qp, dz);
  step.dmu = ((-F.comp.array() - bw.mu.array() * step.ds.array()) /
              bw.s.array())
                 .matrix();
  return step;
}

PrimalDualStep solve_transpose(const RiccatiFactorization& fact,
                               const StageQpData& qp,
                               const BarrierWeights& bw, const Iterate& nu) {
  // Reduce: (Q + H'S^{-1}MH) x_z + G' x_lam = nu_z - H' nu_s + H'S^{-1}M nu_mu
  //         G x_z = nu_lam.
  Vector red_z = nu.z;
  if (bw.d.size() > 0) {
    const Vector coef =
        (bw.d.array() * nu.mu.array() - nu.s.array()).matrix();
    add_ineq_tmul(qp, coef, &red_z);
  }
  // riccati_solve solves Mt u = -rhs, so negate the reduced right-hand side.
  Vector xz, xlam;
  riccati_solve(fact, Vector(-red_z), Vector(-nu.lam), &xz, &xlam);
  PrimalDualStep out;
  out.dz = std::move(xz);
  out.dlam = std::move(xlam);
  // Back-substitution: x_s = S^{-1}(nu_mu - H x_z), x_mu = nu_s - M x_s.
  const Vector hx = ineq_mul(qp, out.dz);
  out.ds = ((nu.mu - hx).array() / bw.s.array()).matrix();
  out.dmu = nu.s - (bw.mu.array() * out.ds.array()).matrix();
  return out;
}

void densify(const StageQpData& qp, Matrix* Qd, Vector* qd, Matrix* G,
             Vector* g, Matrix* Hd, Vector* hd) {
  const OcpDimensions& dims = qp.dims;
  const TrajectoryLayout lay(dims);
  const Eigen::Index n_z = dims.n_z();
  const Eigen::Index n_g = dims.n_g();
  const Eigen::Index n_ineq = dims.n_ineq();
  const int n_x = dims.n_x;
  const int n_u = dims.n_u;

  Qd->setZero(n_z, n_z);
  qd->setZero(n_z);
  G->setZero(n_g, n_z);
  g->setZero(n_g);
  Hd->setZero(n_ineq, n_z);
  hd->setZero(n_ineq);

  for (int n = 0; n < dims.N; ++n) {
    Qd->block(lay.x_offset(n), lay.x_offset(n), n_x + n_u, n_x + n_u) =
        qp.Q[n];
    qd->segment(lay.x_offset(n), n_x + n_u) = qp.q[n];
    if (n_x > 0) {
      G->block(lay.eq_dyn_row(n), lay.x_offset(n), n_x, n_x) = qp.A[n];
      G->block(lay.eq_dyn_row(n), lay.u_offset(n), n_x, n_u) = qp.B[n];
      G->block(lay.eq_dyn_row(n), lay.x_offset(n + 1), n_x, n_x) =
          -Matrix::Identity(n_x, n_x);
      g->segment(lay.eq_dyn_row(n), n_x) = qp.b[n];
    }
    if (dims.n_h > 0) {
      Hd->block(lay.ineq_stage_row(n), lay.x_offset(n), dims.n_h, n_x) =
          qp.C[n];
      Hd->block(lay.ineq_stage_row(n), lay.u_offset(n), dims.n_h, n_u) =
          qp.D[n];
      hd->segment(lay.ineq_stage_row(n), dims.n_h) = qp.h[n];
    }
  }
  Qd->block(lay.x_offset(dims.N), lay.x_offset(dims.N), n_x, n_x) = qp.Q_term;
  qd->segment(lay.x_offset(dims.N), n_x) = qp.q_term;
  if (n_x > 0) {
    G->block(0, 0, n_x, n_x) = Matrix::Identity(n_x, n_x);
    g->head(n_x) = qp.r_init;
  }
  if (dims.n_h_N > 0) {
    Hd->block(lay.ineq_terminal_row(), lay.x_offset(dims.N), dims.n_h_N,
              n_x) = qp.C_term;
    hd->segment(lay.ineq_terminal_row(), dims.n_h_N) = qp.h_term;
  }
}

Matrix dense_step_matrix(const StageQpData& qp, const Vector& mu,
                         const Vector& s) {
  Matrix Qd, G, Hd;
  Vector qd, g, hd;
  densify(qp, &Qd, &qd, &G, &g, &Hd, &hd);
  const Eigen::Index n_z = Qd.rows();
  const Eigen::Index n_g = G.rows();
  const Eigen::Index n_h = Hd.rows();
  const Eigen::Index n_w = n_z + n_g + 2 * n_h;
  Matrix M = Matrix::Zero(n_w, n_w);
  M.topLeftCorner(n_z, n_z) = Qd;
  M.block(0, n_z, n_z, n_g) = G.transpose();
  M.block(0, n_z + n_g, n_z, n_h) = Hd.transpose();
  M.block(n_z, 0, n_g, n_z) = G;
  M.block(n_z + n_g, 0, n_h, n_z) = Hd;
  M.block(n_z + n_g, n_z + n_g + n_h, n_h, n_h) =
      Matrix::Identity(n_h, n_h);
  M.block(n_z + n_g + n_h, n_z + n_g, n_h, n_h) =
      Matrix(s.asDiagonal());
  M.block(n_z + n_g + n_h, n_z + n_g + n_h, n_h, n_h) =
      Matrix(mu.asDiagonal());
  return M;
}

PrimalDualStep dense_kkt_oracle(const StageQpData& qp, const Vector& mu,
                                const Vector& s, const KktResidual& F) {
  const OcpDimensions& dims = qp.dims;
  const Eigen::Index n_w = dims.n_w();
  if (n_w > kDenseGuard) {
    throw OracleError("dense KKT oracle dimension guard exceeded");
  }
  const Matrix M = dense_step_matrix(qp, mu, s);
  Eigen::FullPivLU<Matrix> lu(M);
  if (!lu.isInvertible()) {
    throw OracleError("dense KKT matrix is singular");
  }
  const Vector sol = lu.solve(Vector(-F.stacked()));
  PrimalDualStep step;
  const Eigen::Index n_z = dims.n_z();
  const Eigen::Index n_g = dims.n_g();
  const Eigen::Index n_h = dims.n_ineq();
  step.dz = sol.head(n_z);
  step.dlam = sol.segment(n_z, n_g);
  step.dmu = sol.segment(n_z + n_g, n_h);
  step.ds = sol.tail(n_h);
  return step;
}

}  // namespace ocpsens
