// Copyright (C) 2026 the ocpsens authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include "ocpsens/nlp.hpp"
#include "ocpsens/ocp.hpp"

namespace ocpsens {

/// Diagonal barrier weights d_i = mu_i / s_i used to eliminate the
/// inequality-multiplier and slack blocks from the step equations. The
/// source mu and s are kept for the back-substitutions.
struct BarrierWeights {
  Vector d;   ///< mu ./ s, strictly positive
  Vector mu;  ///< inequality multipliers
  Vector s;   ///< slacks

  /// Throws std::invalid_argument unless mu, s > 0 componentwise.
  static BarrierWeights from(const Vector& mu, const Vector& s);
};

/// Stage-blocked reduced KKT matrix: the condensed symmetric system over
/// (dz, dlam) after eliminating the multiplier/slack blocks. Qt blocks are
/// the stage Hessians augmented by the barrier-weighted constraint rows,
/// Qt_n = Q_n + [C D]' diag(d_n) [C D]. The object is self-contained (it
/// copies the dynamics blocks) so factorizations can outlive the QP data.
struct ReducedKkt {
  OcpDimensions dims;
  std::vector<Matrix> Qt;  ///< N blocks over (x, u)
  Matrix Qt_term;          ///< terminal block over x_N
  std::vector<Matrix> A;   ///< dynamics Jacobians, copied from the QP data
  std::vector<Matrix> B;
};

/// Backward-recursion factorization of the reduced KKT matrix. Immutable
/// after construction; any number of right-hand sides can be solved against
/// it. Stage cost-to-go blocks P, the factorized control-control blocks F,
/// feedback gains K = -F^{-1} H and the coupling blocks H are retained, so
/// each additional solve costs one backward and one forward sweep of
/// matrix-vector work.
struct RiccatiFactorization {
  OcpDimensions dims;
  std::vector<Matrix> P;                   ///< N+1 cost-to-go blocks
  std::vector<Eigen::LDLT<Matrix>> F_fac;  ///< N factorized control blocks
  std::vector<Matrix> K;                   ///< N feedback gains
  std::vector<Matrix> H;                   ///< N coupling blocks Q_ux + B'PA
  std::vector<Matrix> A;                   ///< dynamics blocks (shared copy)
  std::vector<Matrix> B;
  bool inertia_ok = true;
};

/// Full primal-dual step (dz, dlam, dmu, ds) in flat layout.
struct PrimalDualStep {
  Vector dz;
  Vector dlam;
  Vector dmu;
  Vector ds;
};

/// Builds the reduced KKT blocks from QP data and strictly positive
/// (mu, s). Throws std::invalid_argument on nonpositive mu or s.
ReducedKkt assemble_reduced(const StageQpData& qp, const Vector& mu,
                            const Vector& s);

/// Factorizes the reduced KKT matrix by the backward stage recursion.
/// Throws FactorizationError carrying the stage index when a
/// control-control block is singular or indefinite (relative pivot
/// threshold 1e-12), which signals failure of the regularity assumptions.
RiccatiFactorization riccati_factorize(const ReducedKkt& red);

/// Solves  Mt * (dz, dlam) = -rhs  for the reduced system defined by `red`,
/// where rhs = (rhs_z, rhs_lam) is a stacked residual. Multi-column
/// right-hand sides are processed in panels of up to 16 columns.
void riccati_solve(const RiccatiFactorization& fact, const Matrix& rhs_z,
                   const Matrix& rhs_lam, Matrix* dz, Matrix* dlam);

/// Single right-hand-side convenience overload.
void riccati_solve(const RiccatiFactorization& fact, const Vector& rhs_z,
                   const Vector& rhs_lam, Vector* dz, Vector* dlam);

/// Reduces a full residual F = (stat, eq, ineq, comp) to the condensed
/// right-hand side (rhs_z, rhs_lam) with
///   rhs_z = stat + H' S^{-1} (M ineq - comp),  rhs_lam = eq,
/// so that riccati_solve(rhs) yields the (dz, dlam) of the full Newton step.
void reduce_residual(const StageQpData& qp, const BarrierWeights& bw,
                     const KktResidual& F, Vector* rhs_z, Vector* rhs_lam);

/// Recovers the eliminated blocks of the Newton step:
///   ds  = -ineq - H dz,   dmu = S^{-1} (-comp - M ds),
/// completing the solve of the full step system for residual F.
PrimalDualStep expand_step(const Vector& dz, const Vector& dlam,
                           const StageQpData& qp, const BarrierWeights& bw,
                           const KktResidual& F);

/// Solves the transposed step system  K' x = nu  for an iterate-shaped seed
/// nu, reusing the factorization of the reduced matrix (which is symmetric;
/// only the elimination order differs):
///   reduced rhs = (nu_z - H' nu_s + H' S^{-1} M nu_mu, nu_lam),
///   x_s = S^{-1} (nu_mu - H x_z),   x_mu = nu_s - M x_s.
PrimalDualStep solve_transpose(const RiccatiFactorization& fact,
                               const StageQpData& qp,
                               const BarrierWeights& bw, const Iterate& nu);

/// Dense flattenings of the stage-blocked QP data (test oracles and small
/// dense solves): objective (Qd, qd), equality rows (G, g) including the
/// initial-state identity row, inequality rows (Hd, hd).
void densify(const StageQpData& qp, Matrix* Qd, Vector* qd, Matrix* G,
             Vector* g, Matrix* Hd, Vector* hd);

/// Builds the full (n_w x n_w) step matrix
///   [ Q  G'  H'  0 ]
///   [ G  0   0   0 ]
///   [ H  0   0   I ]
///   [ 0  0   S   M ]
/// densely from the QP data and (mu, s).
Matrix dense_step_matrix(const StageQpData& qp, const Vector& mu,
                         const Vector& s);

/// Reference solve of the full step system  K * step = -F  by dense LU.
/// Guarded to total dimension <= 2000; throws OracleError beyond that or
/// when the dense matrix is numerically singular.
PrimalDualStep dense_kkt_oracle(const StageQpData& qp, const Vector& mu,
                                const Vector& s, const KktResidual& F);

}  // namespace ocpsens
