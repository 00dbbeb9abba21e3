// Copyright (C) 2026 the ocpsens authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <variant>
#include <vector>

#include "ocpsens/riccati.hpp"
#include "ocpsens/sqp.hpp"

namespace ocpsens {

/// Factorized derivative state at a converged solution: exact-Hessian QP
/// data, barrier weights from (mu*, s*), and the Riccati factorization of
/// the reduced matrix. Shared by forward and adjoint solves. Construction
/// rejects any Hessian mode other than exact-with-zero-regularization,
/// since approximate or shifted Hessians silently corrupt the derivative
/// values; a deliberately different mode is available for diagnostics via
/// setup_with_hessian_mode.
struct SensitivityWorkspace {
  const OcpDefinition* ocp = nullptr;
  StageQpData qp;
  BarrierWeights weights;
  RiccatiFactorization fact;
  Iterate w;      ///< solution iterate the factorization was built at
  Vector theta;
  double tau_min = 0.0;
  RegularityDiagnostics diagnostics;
  bool degenerate = false;  ///< strict-complementarity margin below 1e-6
};

/// Columns of the solution-map derivative dw/dtheta for the selected
/// parameter indices, with row layout identical to the stacked iterate.
struct ForwardSensitivities {
  Matrix columns;                  ///< n_w x indices.size()
  std::vector<int> param_indices;

  Eigen::Index n_z = 0, n_g = 0, n_h = 0;

  /// Rows of d z / d theta (primal block).
  Matrix primal() const { return columns.topRows(n_z); }
  /// Row of one primal entry across the selected parameters.
  Vector primal_row(Eigen::Index zi) const {
    return columns.row(zi).transpose();
  }
};

/// Seed vector for an adjoint solve, shaped like a stacked iterate. Typical
/// seeds are sparse selections of primal entries.
struct AdjointSeed {
  Iterate nu;

  static AdjointSeed zero(const OcpDimensions& dims) {
    AdjointSeed seed;
    seed.nu = Iterate(dims.n_z(), dims.n_g(), dims.n_ineq());
    return seed;
  }
  /// Seed selecting a single primal entry.
  static AdjointSeed primal_unit(const OcpDimensions& dims, Eigen::Index zi) {
    AdjointSeed seed = zero(dims);
    seed.nu.z[zi] = 1.0;
    return seed;
  }
};

/// nu' dw/dtheta for the seed the adjoint was run with; length n_theta.
struct AdjointResult {
  Vector s_adj;
};

/// Assembles and factorizes the derivative state at a converged solution:
/// exact-Hessian linearization, barrier weights with slacks clamped at
/// 1e-14, Riccati factorization. Throws std::invalid_argument if the result
/// did not converge and FactorizationError when the reduced matrix loses
/// regularity (e.g. at an active-set change). A strict-complementarity
/// margin below 1e-6 sets the `degenerate` flag but does not fail.
SensitivityWorkspace setup_and_factorize(const OcpDefinition& ocp,
                                         const SolveResult& result,
                                         const Vector& theta, double tau_min);

/// Diagnostic variant that accepts an arbitrary Hessian mode. Intended only
/// for demonstrating how approximate-Hessian derivative values degrade;
/// never use for production sensitivities.
SensitivityWorkspace setup_with_hessian_mode(const OcpDefinition& ocp,
                                             const SolveResult& result,
                                             const Vector& theta,
                                             double tau_min,
                                             const HessianMode& mode);

/// Forward sensitivities: solves the step system for the negated
/// parameter-Jacobian columns of the requested indices, yielding the
/// solution-map derivative columns d w / d theta_j.
ForwardSensitivities forward(const SensitivityWorkspace& ws,
                             const std::vector<int>& param_indices);

/// All-parameter convenience overload.
ForwardSensitivities forward(const SensitivityWorkspace& ws);

/// Adjoint sensitivity: one transposed solve against the seed followed by a
/// single multiplication with the parameter Jacobian; equals
/// seed' (dw/dtheta) without forming the forward columns.
AdjointResult adjoint(const SensitivityWorkspace& ws, const AdjointSeed& seed);

/// Reference derivative from the active-set formulation: classifies the
/// active inequalities (mu_i > 1e-6 and |h_i| < 1e-6; inactive needs
/// mu_i <= 1e-6 and h_i < -1e-6; anything else throws DiagnosticsError),
/// then differentiates the equality-reduced first-order system densely.
/// Returns rows (z, lam, mu_active) x n_theta along with the active row
/// indices. Requires a solve with tau_min = 0. Test oracle.
struct ActiveSetSensitivities {
  Matrix rows;                   ///< (n_z + n_g + n_active) x n_theta
  std::vector<int> active_rows;  ///< inequality indices classified active

  Eigen::Index n_z = 0, n_g = 0;
  Matrix primal() const { return rows.topRows(n_z); }
};
ActiveSetSensitivities active_set_sensitivity_oracle(const OcpDefinition& ocp,
                                                     const SolveResult& result,
                                                     const Vector& theta);

/// Central finite differences of the solution map: re-solves at
/// theta +- h_j e_j with step h_j = h_rel * max(1, |theta_j|), warm-started
/// from the base solution. Returns the full n_w x n_theta difference
/// quotient matrix. Test oracle; any re-solve failure propagates as
/// OracleError.
Matrix finite_difference_oracle(const OcpDefinition& ocp, const Vector& theta,
                                const SqpSettings& settings,
                                double h_rel = 1e-5,
                                const std::optional<SolveResult>& base = {});

/// Two-solver orchestration: solves with the (possibly approximate-Hessian,
/// regularized) nominal settings, then rebuilds exact-Hessian derivative
/// state at the solution and runs the requested sensitivity. Only the
/// converged iterate crosses between the two solvers.
struct SensitivityRequest {
  enum class Kind { None, Forward, Adjoint };
  Kind kind = Kind::None;
  std::vector<int> param_indices;      ///< Forward: empty means all
  std::optional<AdjointSeed> seed;     ///< Adjoint

  static SensitivityRequest none() { return {}; }
  static SensitivityRequest forward_all() {
    return {Kind::Forward, {}, {}};
  }
  static SensitivityRequest forward_of(std::vector<int> indices) {
    return {Kind::Forward, std::move(indices), {}};
  }
  static SensitivityRequest adjoint_of(AdjointSeed seed) {
    return {Kind::Adjoint, {}, std::move(seed)};
  }
};

struct TwoSolverOutput {
  SolveResult nominal;
  std::optional<ForwardSensitivities> forward;
  std::optional<AdjointResult> adjoint;
};

TwoSolverOutput two_solver_solve_and_sensitivity(
    const OcpDefinition& ocp, const Vector& theta,
    const SqpSettings& nominal_settings, const SensitivityRequest& request,
    const std::optional<Iterate>& init = {});

}  // namespace ocpsens
