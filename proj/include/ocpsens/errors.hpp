// Copyright (C) 2026 the ocpsens authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace ocpsens {

/// A problem function returned a non-finite value or could not be evaluated.
/// Carries the index of the offending block (residual block or stage).
class EvaluationError : public std::runtime_error {
 public:
  EvaluationError(const std::string& msg, int index)
      : std::runtime_error(msg + " (block " + std::to_string(index) + ")"),
        index_(index) {}

  int index() const { return index_; }

 private:
  int index_;
};

/// The stage-wise factorization hit a singular or indefinite control-control
/// pivot block. This signals loss of the regularity the solver relies on
/// (e.g. the reduced Hessian is not positive definite at the current point).
class FactorizationError : public std::runtime_error {
 public:
  FactorizationError(const std::string& msg, int stage)
      : std::runtime_error(msg + " (stage " + std::to_string(stage) + ")"),
        stage_(stage) {}

  int stage() const { return stage_; }

 private:
  int stage_;
};

/// A dual-number primitive was evaluated where it is not differentiable
/// (e.g. abs at zero).
class NonsmoothError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A reference (oracle) computation failed, e.g. a dense factorization of a
/// singular matrix or a dimension guard was exceeded.
class OracleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A diagnostic classification was ambiguous, e.g. a constraint that is
/// neither clearly active nor clearly inactive at the requested tolerance.
class DiagnosticsError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace ocpsens
