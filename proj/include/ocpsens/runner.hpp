// Copyright (C) 2026 the ocpsens authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "ocpsens/csv.hpp"
#include "ocpsens/ocp.hpp"

namespace ocpsens {

/// Exit codes shared by the runners and the command-line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfigError = 2;
inline constexpr int kExitInternalError = 3;

/// Declarative description of one example run: which built-in problem,
/// which parameter grid, which solver settings, and where the table goes.
struct ExampleSpec {
  std::string name;  ///< tutorial | jump | pendulum | lqr_bench | many_param

  /// Parameter grid; when empty it is filled from {grid_min, grid_max,
  /// grid_step} (inclusive of both ends up to rounding).
  std::vector<double> theta_grid;
  double grid_min = 0.0;
  double grid_max = 0.0;
  double grid_step = 0.0;

  std::vector<double> tau_min_values{0.0};
  double tol = 1e-8;
  bool gauss_newton = false;  ///< nominal Hessian switch

  /// Extra columns: finite-difference oracle and the diagnostic
  /// approximate-Hessian sensitivity (pendulum only).
  bool with_fd = false;
  bool with_gn_sensitivity = false;

  /// jump: one solve per (grid point, initialization).
  std::vector<double> initializations{0.0};

  /// lqr_bench knobs.
  double u_max = 1.0;
  std::uint64_t seed = 0;
  int n_batch = 128;
  int workers = 1;

  std::string out_path;        ///< empty writes to stdout
  std::string format = "csv";  ///< csv | json
};

/// Runs one example end to end and writes the result table. Solver failures
/// at individual grid points become status rows, not errors; the return
/// value is kExitOk unless the spec itself is invalid (kExitConfigError) or
/// an unexpected exception escapes (kExitInternalError). Diagnostics go to
/// `diag`.
int run_example(const ExampleSpec& spec, std::ostream& diag);

/// Same, but returns the table instead of writing it (used by tests and by
/// run_example itself).
CsvTable build_example_table(const ExampleSpec& spec, std::ostream& diag);

/// Timing studies behind the `bench` subcommand.
struct BenchSpec {
  std::string name;  ///< lqr_bench | many_param | scaling
  std::uint64_t seed = 0;
  int workers = 1;
  int repetitions = 20;
  double u_max = 1.0;
  int n_batch = 128;
  double tol = 1e-8;
  std::vector<int> horizons{64, 256};  ///< scaling study
  std::string out_path;
  std::string format = "csv";
};

int run_bench(const BenchSpec& spec, std::ostream& diag);
CsvTable build_bench_table(const BenchSpec& spec, std::ostream& diag);

/// Oracle cross-check behind the `sens-compare` subcommand: forward
/// sensitivities vs. the active-set and finite-difference oracles over a
/// parameter grid.
struct SensCompareSpec {
  std::string name = "pendulum";  ///< tutorial | jump | pendulum
  std::vector<double> theta_grid;
  double grid_min = 0.0;
  double grid_max = 0.0;
  double grid_step = 0.0;
  double tol = 1e-10;
  std::string out_path;
  std::string format = "csv";
};

int run_sens_compare(const SensCompareSpec& spec, std::ostream& diag);
CsvTable build_sens_compare_table(const SensCompareSpec& spec,
                                  std::ostream& diag);

/// Expands {lo, hi, step} into an inclusive grid; step must be positive and
/// lo <= hi. Grid points are computed as lo + k*step so that equal inputs
/// give bitwise-equal grids.
std::vector<double> make_grid(double lo, double hi, double step);

/// Writes `table` to spec-selected destination/format. Returns kExitOk or
/// kExitConfigError (unknown format, unwritable path).
int write_table(const CsvTable& table, const std::string& out_path,
                const std::string& format, std::ostream& diag);

}  // namespace ocpsens
