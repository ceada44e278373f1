#pragma once

namespace lagflow {

/// Dense 2x2 matrix [[a11, a12], [a21, a22]]; for Jacobians, row = target
/// component, column = source coordinate.
struct Mat2 {
  double a11 = 0.0, a12 = 0.0, a21 = 0.0, a22 = 0.0;

  static constexpr Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }

  double operator()(int r, int c) const {
    return r == 0 ? (c == 0 ? a11 : a12) : (c == 0 ? a21 : a22);
  }
  double det() const { return a11 * a22 - a12 * a21; }

  friend Mat2 operator*(const Mat2& x, const Mat2& y) {
    return {x.a11 * y.a11 + x.a12 * y.a21, x.a11 * y.a12 + x.a12 * y.a22,
            x.a21 * y.a11 + x.a22 * y.a21, x.a21 * y.a12 + x.a22 * y.a22};
  }
  bool operator==(const Mat2&) const = default;
};

/// Symmetric 2x2 matrix of second derivatives (d11, d12, d22).
struct Hessian2 {
  double d11 = 0.0, d12 = 0.0, d22 = 0.0;

  double operator()(int i, int j) const {
    if (i != j) return d12;
    return i == 0 ? d11 : d22;
  }
};

}  // namespace lagflow
