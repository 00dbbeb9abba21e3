// Copyright (C) 2026 the ocpsens authors
// SPDX-License-Identifier: Apache-2.0
#include "ocpsens/batch.hpp"

#include <algorithm>
#include <chrono>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace ocpsens {

namespace {

BatchItemResult run_one(const BatchRequest& req, size_t index) {
  const BatchInstance& inst = req.instances[index];
  BatchItemResult item;
  try {
    OcpDefinition local = *req.ocp;
    if (inst.x0_bar) local.x0_bar = *inst.x0_bar;
    item.solve = solve_nlp(local, inst.theta, inst.init, req.settings);
    if (item.solve.status == SolveStatus::Converged &&
        req.sensitivity != SensitivityRequest::Kind::None) {
      const SensitivityWorkspace ws = setup_and_factorize(
          local, item.solve, inst.theta, req.settings.tau_min());
      if (req.sensitivity == SensitivityRequest::Kind::Forward) {
        if (req.forward_indices.empty()) {
          item.forward = forward(ws);
        } else {
          item.forward = forward(ws, req.forward_indices);
        }
      } else {
        if (req.adjoint_seeds.size() <= index &&
            req.adjoint_seeds.size() != 1) {
          throw std::invalid_argument("missing adjoint seed for instance");
        }
        const AdjointSeed& seed = req.adjoint_seeds.size() == 1
                                      ? req.adjoint_seeds[0]
                                      : req.adjoint_seeds[index];
        item.adjoint = adjoint(ws, seed);
      }
    }
  } catch (const std::exception& e) {
    item.error = e.what();
    if (item.solve.status == SolveStatus::Converged) {
      item.solve.status = SolveStatus::EvalFail;
    }
  } catch (...) {
    item.error = "unknown error";
  }
  return item;
}

BatchResult aggregate(std::vector<BatchItemResult> items, double wall_s) {
  BatchResult out;
  out.items = std::move(items);
  for (const BatchItemResult& item : out.items) {
    if (item.solve.status == SolveStatus::Converged && item.error.empty()) {
      ++out.converged;
    }
    out.total_sqp_iterations += item.solve.sqp_iterations;
  }
  out.wall_time_s = wall_s;
  return out;
}

void validate(const BatchRequest& req) {
  if (req.ocp == nullptr) {
    throw std::invalid_argument("batch request without a problem definition");
  }
  if (req.workers < 1) {
    throw std::invalid_argument("batch worker count must be at least 1");
  }
}

}  // namespace

BatchResult batch_run(const BatchRequest& req) {
  validate(req);
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<BatchItemResult> items(req.instances.size());
#ifdef _OPENMP
  const int n = int(req.instances.size());
#pragma omp parallel for schedule(dynamic) num_threads(req.workers)
  for (int i = 0; i < n; ++i) {
    items[size_t(i)] = run_one(req, size_t(i));
  }
#else
  for (size_t i = 0; i < req.instances.size(); ++i) {
    items[i] = run_one(req, i);
  }
#endif
  const std::chrono::duration<double> dt =
      std::chrono::steady_clock::now() - t0;
  return aggregate(std::move(items), dt.count());
}

BatchResult batch_run_serial(const BatchRequest& req) {
  validate(req);
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<BatchItemResult> items(req.instances.size());
  for (size_t i = 0; i < req.instances.size(); ++i) {
    items[i] = run_one(req, i);
  }
  const std::chrono::duration<double> dt =
      std::chrono::steady_clock::now() - t0;
  return aggregate(std::move(items), dt.count());
}

}  // namespace ocpsens
