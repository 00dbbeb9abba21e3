// Copyright (C) 2026 the ocpsens authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <type_traits>

#include <Eigen/Core>

#include "ocpsens/errors.hpp"

namespace ocpsens {

/// Forward-mode dual number: carries a value and one directional derivative.
///
/// T is either double (first derivatives) or another Dual (second
/// derivatives via nesting). The types used throughout the library are the
/// Dual1 / Dual2 aliases below.
template <typename T>
struct Dual {
  T val{};  ///< function value
  T dot{};  ///< directional derivative along the seeded direction

  Dual() = default;
  Dual(T v, T d) : val(std::move(v)), dot(std::move(d)) {}

  /// Implicit lift of a constant: derivative part is zero.
  template <typename U,
            typename = std::enable_if_t<std::is_arithmetic_v<U> ||
                                        std::is_constructible_v<T, U>>>
  Dual(const U& v) : val(v), dot() {}  // NOLINT(runtime/explicit)

  Dual& operator+=(const Dual& o) {
    val += o.val;
    dot += o.dot;
    return *this;
  }
  Dual& operator-=(const Dual& o) {
    val -= o.val;
    dot -= o.dot;
    return *this;
  }
  Dual& operator*=(const Dual& o) {
    dot = dot * o.val + val * o.dot;
    val = val * o.val;
    return *this;
  }
  Dual& operator/=(const Dual& o) {
    val = val / o.val;
    dot = (dot - val * o.dot) / o.val;
    return *this;
  }
};

using Dual1 = Dual<double>;         ///< first-order dual
using Dual2 = Dual<Dual<double>>;   ///< nested dual for second derivatives

/// Recursively extracts the underlying double value of a (possibly nested)
/// dual number; identity on plain doubles.
inline double scalar_value(double x) { return x; }
template <typename T>
double scalar_value(const Dual<T>& x) {
  return scalar_value(x.val);
}

// --- arithmetic --------------------------------------------------------

template <typename T>
Dual<T> operator+(const Dual<T>& a, const Dual<T>& b) {
  return {a.val + b.val, a.dot + b.dot};
}
template <typename T>
Dual<T> operator-(const Dual<T>& a, const Dual<T>& b) {
  return {a.val - b.val, a.dot - b.dot};
}
template <typename T>
Dual<T> operator*(const Dual<T>& a, const Dual<T>& b) {
  return {a.val * b.val, a.dot * b.val + a.val * b.dot};
}
template <typename T>
Dual<T> operator/(const Dual<T>& a, const Dual<T>& b) {
  T v = a.val / b.val;
  return {v, (a.dot - v * b.dot) / b.val};
}
template <typename T>
Dual<T> operator-(const Dual<T>& a) {
  return {-a.val, -a.dot};
}
template <typename T>
Dual<T> operator+(const Dual<T>& a) {
  return a;
}

// Mixed dual/double forms, so that expressions like 0.5 * x work without
// manually lifting every constant.
template <typename T>
Dual<T> operator+(const Dual<T>& a, double b) {
  return {a.val + T(b), a.dot};
}
template <typename T>
Dual<T> operator+(double a, const Dual<T>& b) {
  return b + a;
}
template <typename T>
Dual<T> operator-(const Dual<T>& a, double b) {
  return {a.val - T(b), a.dot};
}
template <typename T>
Dual<T> operator-(double a, const Dual<T>& b) {
  return {T(a) - b.val, -b.dot};
}
template <typename T>
Dual<T> operator*(const Dual<T>& a, double b) {
  return {a.val * T(b), a.dot * T(b)};
}
template <typename T>
Dual<T> operator*(double a, const Dual<T>& b) {
  return b * a;
}
template <typename T>
Dual<T> operator/(const Dual<T>& a, double b) {
  return {a.val / T(b), a.dot / T(b)};
}
template <typename T>
Dual<T> operator/(double a, const Dual<T>& b) {
  return Dual<T>(a) / b;
}

// Comparisons act on the underlying values (standard forward-mode
// convention: branch decisions follow the primal trajectory).
template <typename T>
bool operator<(const Dual<T>& a, const Dual<T>& b) {
  return scalar_value(a) < scalar_value(b);
}
template <typename T>
bool operator>(const Dual<T>& a, const Dual<T>& b) {
  return scalar_value(a) > scalar_value(b);
}
template <typename T>
bool operator<=(const Dual<T>& a, const Dual<T>& b) {
  return scalar_value(a) <= scalar_value(b);
}
template <typename T>
bool operator>=(const Dual<T>& a, const Dual<T>& b) {
  return scalar_value(a) >= scalar_value(b);
}
template <typename T>
bool operator==(const Dual<T>& a, const Dual<T>& b) {
  return scalar_value(a) == scalar_value(b);
}
template <typename T>
bool operator!=(const Dual<T>& a, const Dual<T>& b) {
  return !(a == b);
}

// --- elementary functions ----------------------------------------------

using std::cos;
using std::exp;
using std::log;
using std::pow;
using std::sin;
using std::sqrt;
using std::tanh;

template <typename T>
Dual<T> sin(const Dual<T>& x) {
  return {sin(x.val), cos(x.val) * x.dot};
}
template <typename T>
Dual<T> cos(const Dual<T>& x) {
  return {cos(x.val), -sin(x.val) * x.dot};
}
template <typename T>
Dual<T> exp(const Dual<T>& x) {
  T e = exp(x.val);
  return {e, e * x.dot};
}
template <typename T>
Dual<T> log(const Dual<T>& x) {
  return {log(x.val), x.dot / x.val};
}
template <typename T>
Dual<T> sqrt(const Dual<T>& x) {
  T r = sqrt(x.val);
  return {r, x.dot / (2.0 * r)};
}
template <typename T>
Dual<T> tanh(const Dual<T>& x) {
  T t = tanh(x.val);
  return {t, (1.0 - t * t) * x.dot};
}
template <typename T>
Dual<T> pow(const Dual<T>& x, double p) {
  T v = pow(x.val, p);
  return {v, p * pow(x.val, p - 1.0) * x.dot};
}
template <typename T>
Dual<T> pow(const Dual<T>& x, int p) {
  return pow(x, static_cast<double>(p));
}

/// abs is differentiable away from zero; at zero there is no derivative to
/// propagate, so we refuse instead of silently picking a subgradient.
template <typename T>
Dual<T> abs(const Dual<T>& x) {
  double v = scalar_value(x);
  if (v > 0.0) return x;
  if (v < 0.0) return -x;
  throw NonsmoothError("abs() evaluated at 0 has no directional derivative");
}

template <typename T>
bool isfinite(const Dual<T>& x) {
  return std::isfinite(scalar_value(x));
}

}  // namespace ocpsens

// Eigen integration: lets Eigen::Matrix<Dual, ...> work inside the generic
// problem-function evaluators.
namespace Eigen {

template <typename T>
struct NumTraits<ocpsens::Dual<T>> : NumTraits<double> {
  using Real = ocpsens::Dual<T>;
  using NonInteger = ocpsens::Dual<T>;
  using Literal = double;
  using Nested = ocpsens::Dual<T>;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 2,
    AddCost = 2,
    MulCost = 4,
  };
  static inline Real epsilon() { return Real(NumTraits<double>::epsilon()); }
  static inline Real dummy_precision() {
    return Real(NumTraits<double>::dummy_precision());
  }
  static inline int digits10() { return NumTraits<double>::digits10(); }
};

template <typename T, typename BinOp>
struct ScalarBinaryOpTraits<ocpsens::Dual<T>, double, BinOp> {
  using ReturnType = ocpsens::Dual<T>;
};
template <typename T, typename BinOp>
struct ScalarBinaryOpTraits<double, ocpsens::Dual<T>, BinOp> {
  using ReturnType = ocpsens::Dual<T>;
};

}  // namespace Eigen
