// Copyright (C) 2026 the ocpsens authors
// SPDX-License-Identifier: Apache-2.0
#include "ocpsens/ipm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

#include "ocpsens/errors.hpp"
#include "ocpsens/riccati.hpp"

namespace ocpsens {

const char* to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::Converged:
      return "converged";
    case SolveStatus::MaxIter:
      return "max_iter";
    case SolveStatus::Breakdown:
      return "breakdown";
    case SolveStatus::EvalFail:
      return "eval_fail";
  }
  return "unknown";
}

double fraction_to_boundary(const Vector& s, const Vector& mu,
                            const Vector& ds, const Vector& dmu,
                            double gamma) {
  if (!(gamma > 0.0) || !(gamma < 1.0)) {
    throw std::invalid_argument("fraction-to-boundary factor must be in (0,1)");
  }
  double alpha_max = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (ds[i] < 0.0) alpha_max = std::min(alpha_max, -s[i] / ds[i]);
    if (dmu[i] < 0.0) alpha_max = std::min(alpha_max, -mu[i] / dmu[i]);
  }
  if (!std::isfinite(alpha_max)) return 1.0;
  return std::min(1.0, gamma * alpha_max);
}

double barrier_schedule(double measure, double tau_min, double sigma) {
  return std::max(tau_min, sigma * measure);
}

namespace {

struct DenseQp {
  Matrix Q;
  Vector q;
  Matrix G;
  Vector g;
  Matrix H;
  Vector h;
};

KktResidual dense_residual(const DenseQp& qp, const Iterate& w, double tau) {
  KktResidual res;
  res.stat = qp.Q * w.z + qp.q;
  if (qp.G.rows() > 0) res.stat.noalias() += qp.G.transpose() * w.lam;
  if (qp.H.rows() > 0) res.stat.noalias() += qp.H.transpose() * w.mu;
  res.eq = qp.G * w.z + qp.g;
  res.ineq = qp.H * w.z + qp.h + w.s;
  res.comp = (w.mu.array() * w.s.array() - tau).matrix();
  res.update_inf_norm();
  return res;
}

}  // namespace

KktResidual eval_qp_residual(const StageQpData& qp, const Iterate& w,
                             double tau) {
  DenseQp d;
  densify(qp, &d.Q, &d.q, &d.G, &d.g, &d.H, &d.h);
  return dense_residual(d, w, tau);
}

std::pair<Iterate, IpmStats> solve_qp(const StageQpData& qp,
                                      const IpmSettings& settings,
                                      const Iterate* warm) {
  const OcpDimensions& dims = qp.dims;
  const Eigen::Index n_h = dims.n_ineq();
  if (settings.tau_min < 0.0 || settings.tol <= 0.0 ||
      settings.max_iter < 1) {
    throw std::invalid_argument("ipm settings out of range");
  }

  DenseQp d;
  densify(qp, &d.Q, &d.q, &d.G, &d.g, &d.H, &d.h);

  Iterate w;
  if (warm != nullptr) {
    if (warm->z.size() != dims.n_z() || warm->lam.size() != dims.n_g() ||
        warm->mu.size() != n_h || warm->s.size() != n_h) {
      throw std::invalid_argument("warm start iterate has wrong dimensions");
    }
    for (Eigen::Index i = 0; i < n_h; ++i) {
      if (!(warm->mu[i] > 0.0) || !(warm->s[i] > 0.0)) {
        throw std::invalid_argument(
            "warm start multipliers and slacks must be strictly positive");
      }
    }
    w = *warm;
  } else {
    w.z = Vector::Zero(dims.n_z());
    w.lam = Vector::Zero(dims.n_g());
    w.s.resize(n_h);
    w.mu.resize(n_h);
    for (Eigen::Index i = 0; i < n_h; ++i) {
      w.s[i] = std::max(1.0, -d.h[i] + 1.0);
      w.mu[i] = settings.tau0 / w.s[i];
    }
  }

  IpmStats stats;
  double tau_prev = settings.tau0;
  for (int it = 0;; ++it) {
    const KktResidual res = dense_residual(d, w, settings.tau_min);
    const double measure = n_h > 0 ? w.mu.dot(w.s) / double(n_h) : 0.0;
    stats.final_residual = res.inf_norm;
    if (res.inf_norm <= settings.tol &&
        (settings.tau_min > 0.0 || n_h == 0 ||
         measure <= settings.tau_zero_target)) {
      stats.status = SolveStatus::Converged;
      break;
    }
    if (it >= settings.max_iter) {
      stats.status = SolveStatus::MaxIter;
      break;
    }

    const double tau = std::min(
        tau_prev, barrier_schedule(measure, settings.tau_min, settings.sigma));
    tau_prev = tau;
    stats.final_tau = tau;

    KktResidual res_tau = res;
    res_tau.comp = (w.mu.array() * w.s.array() - tau).matrix();
    res_tau.update_inf_norm();

    PrimalDualStep step;
    try {
      const BarrierWeights bw =
          n_h > 0 ? BarrierWeights::from(w.mu, w.s) : BarrierWeights{};
      const ReducedKkt red = assemble_reduced(qp, w.mu, w.s);
      const RiccatiFactorization fact = riccati_factorize(red);
      Vector rhs_z, rhs_lam, dz, dlam;
      reduce_residual(qp, bw, res_tau, &rhs_z, &rhs_lam);
      riccati_solve(fact, rhs_z, rhs_lam, &dz, &dlam);
      step = expand_step(dz, dlam, qp, bw, res_tau);
    } catch (const FactorizationError& e) {
      stats.status = SolveStatus::Breakdown;
      stats.breakdown_stage = e.stage();
      break;
    }

    const double alpha =
        n_h > 0 ? fraction_to_boundary(w.s, w.mu, step.ds, step.dmu,
                                       settings.ftb_gamma)
                : 1.0;
    w.z += alpha * step.dz;
    w.lam += alpha * step.dlam;
    w.mu += alpha * step.dmu;
    w.s += alpha * step.ds;
    ++stats.iterations;
  }
  return {std::move(w), stats};
}

}  // namespace ocpsens
