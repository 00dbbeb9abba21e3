// Copyright (C) 2026 the ocpsens authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Core>

#include "ocpsens/dual.hpp"

namespace ocpsens {

template <typename T>
using VecX = Eigen::Matrix<T, Eigen::Dynamic, 1>;

/// Lifts a vector of doubles into a vector of (possibly nested) duals with
/// zero derivative parts.
template <typename T>
VecX<T> lift(const Eigen::Ref<const Eigen::VectorXd>& v) {
  VecX<T> out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) out[i] = T(v[i]);
  return out;
}

/// Extracts the value parts of a dual vector.
template <typename T>
Eigen::VectorXd value_parts(const VecX<Dual<T>>& v) {
  Eigen::VectorXd out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) out[i] = scalar_value(v[i]);
  return out;
}

/// Gradient of a scalar function via one forward sweep per input direction.
/// F must be callable as F(const VecX<Dual1>&) -> Dual1.
template <typename F>
Eigen::VectorXd gradient(F&& f, const Eigen::Ref<const Eigen::VectorXd>& x) {
  Eigen::VectorXd g(x.size());
  VecX<Dual1> xd = lift<Dual1>(x);
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    xd[i].dot = 1.0;
    g[i] = f(xd).dot;
    xd[i].dot = 0.0;
  }
  return g;
}

/// Jacobian of a vector function, one forward sweep per input direction.
/// F must be callable as F(const VecX<Dual1>&) -> VecX<Dual1>.
template <typename F>
Eigen::MatrixXd jacobian(F&& f, const Eigen::Ref<const Eigen::VectorXd>& x,
                         Eigen::Index num_outputs) {
  Eigen::MatrixXd J(num_outputs, x.size());
  VecX<Dual1> xd = lift<Dual1>(x);
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    xd[i].dot = 1.0;
    VecX<Dual1> y = f(xd);
    for (Eigen::Index r = 0; r < num_outputs; ++r) J(r, i) = y[r].dot;
    xd[i].dot = 0.0;
  }
  return J;
}

/// Hessian of a scalar function via nested duals: entry (i, j) comes from one
/// evaluation with direction i seeded on the inner dual and direction j on
/// the outer one. Only the lower triangle is evaluated; the result is exactly
/// symmetric by construction.
/// F must be callable as F(const VecX<Dual2>&) -> Dual2.
template <typename F>
Eigen::MatrixXd hessian(F&& f, const Eigen::Ref<const Eigen::VectorXd>& x) {
  const Eigen::Index n = x.size();
  Eigen::MatrixXd H(n, n);
  VecX<Dual2> xd = lift<Dual2>(x);
  for (Eigen::Index j = 0; j < n; ++j) {
    xd[j].dot.val = 1.0;
    for (Eigen::Index i = 0; i <= j; ++i) {
      xd[i].val.dot = 1.0;
      Dual2 y = f(xd);
      H(i, j) = y.dot.dot;
      H(j, i) = H(i, j);
      xd[i].val.dot = 0.0;
    }
    xd[j].dot.val = 0.0;
  }
  return H;
}

/// Mixed second derivative d^2 f / dx_i dy_j of a scalar function of two
/// vector arguments; returns a matrix of shape (x.size(), y.size()).
/// F must be callable as F(const VecX<Dual2>&, const VecX<Dual2>&) -> Dual2.
template <typename F>
Eigen::MatrixXd cross_derivative(F&& f,
                                 const Eigen::Ref<const Eigen::VectorXd>& x,
                                 const Eigen::Ref<const Eigen::VectorXd>& y) {
  Eigen::MatrixXd M(x.size(), y.size());
  VecX<Dual2> xd = lift<Dual2>(x);
  VecX<Dual2> yd = lift<Dual2>(y);
  for (Eigen::Index j = 0; j < y.size(); ++j) {
    yd[j].dot.val = 1.0;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      xd[i].val.dot = 1.0;
      M(i, j) = f(xd, yd).dot.dot;
      xd[i].val.dot = 0.0;
    }
    yd[j].dot.val = 0.0;
  }
  return M;
}

}  // namespace ocpsens
