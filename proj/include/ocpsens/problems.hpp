// Copyright (C) 2026 the ocpsens authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

#include "ocpsens/ocp.hpp"

namespace ocpsens {

/// Built-in example problems. Each builder returns a self-contained
/// OcpDefinition; the nominal parameter vector documented per problem is the
/// one the examples and tests evaluate at.

/// Scalar box-constrained least-squares problem
///   min_z (z - theta^2)^2   s.t.  -1 <= z <= 1,
/// encoded as a degenerate OCP with n_x = 0, n_u = 1, N = 1. Its solution map
/// and sensitivity are known in closed form (clip(theta^2, 1) and 2*theta /
/// 0), which makes it the primary exactness fixture.
OcpDefinition make_tutorial_problem();

/// Closed-form solution map of the tutorial problem and its derivative
/// (undefined at |theta| = 1; these helpers return the two-sided limits from
/// inside/outside respectively and are only used away from those points).
double tutorial_exact_solution(double theta);
double tutorial_exact_sensitivity(double theta);

/// Scalar double-well problem
///   min_x x^4 - x^2 - theta*x   s.t.  -0.75 <= x <= 0.75.
/// Has two local minimizers near theta = 0; the negative branch vanishes near
/// theta ~ 0.544 where second-order sufficiency fails, so the solution map
/// jumps. Exercises initialization-dependent convergence and regularization.
OcpDefinition make_jump_problem();

/// Pendulum-on-cart OCP with one scalar parameter entering the cost
/// (weight scaling), the dynamics (cart mass), and the inequality
/// -1.5 <= p*theta <= 1.5 on the cart position p. State x = (p, phi, v,
/// omega), control force u in [-80, 80], N = 50 shooting intervals of
/// length 0.04 integrated with one RK4 step each, x0 = (0, pi/2, 0, 0).
OcpDefinition make_pendulum_problem();

/// Box-bounded LQR batch benchmark: quadratic cost sum_n [x;u]' H [x;u] plus
/// terminal x' H_x x (H_x = leading state block of H), affine dynamics
/// x+ = A x + B u + b, and |u| <= u_max. All problem data (A, B, b, H) is the
/// parameter vector, packed column-major in that order.
struct LqrBenchData {
  OcpDefinition ocp;
  Vector theta;                        ///< sampled nominal (A, B, b, H) pack
  std::vector<Vector> initial_states;  ///< n_batch sampled initial states
};

/// Seeded generator for the LQR benchmark. A = I + 0.2*M with M, B, b drawn
/// i.i.d. standard normal; H = identity; initial states standard normal.
/// Identical seeds reproduce identical data bit-for-bit.
LqrBenchData generate_lqr_bench(int n_batch, double u_max,
                                std::uint64_t seed, int horizon = 20,
                                int n_x = 8, int n_u = 4);

/// Pendulum-like nonlinear OCP with parameter-free dynamics and three
/// independent parameters per stage (two cost weights and one symmetric
/// control-bound offset), N = 40, so n_theta = 120. Used for the
/// forward-vs-adjoint sensitivity cost comparison, where the per-column
/// cost of the forward mode dominates.
OcpDefinition make_many_param_problem();

/// Nominal parameter vector of the many-parameter problem: all cost weights
/// one, all bound offsets zero.
Vector many_param_nominal_theta();

}  // namespace ocpsens
