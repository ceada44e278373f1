#pragma once

#include <cmath>
#include <numbers>

#include "lagflow/torusmap.hpp"

namespace fixtures {

inline constexpr double kTau = 2.0 * std::numbers::pi;

inline lagflow::Shear shear(lagflow::ShearAxis axis, double a, std::vector<lagflow::TrigTerm> terms) {
  return lagflow::Shear{axis, a, lagflow::Profile{std::move(terms)}};
}

/// (x, y + a sin 2 pi x)
inline lagflow::ShearSpec y_shear(double a) {
  return {{shear(lagflow::ShearAxis::Y, a, {{1, 0.0, 1.0}})}};
}

/// y-shear 0.1 sin 2 pi x followed by x-shear 0.1 sin 2 pi y.
inline lagflow::ShearSpec standard() {
  return {{shear(lagflow::ShearAxis::Y, 0.1, {{1, 0.0, 1.0}}), shear(lagflow::ShearAxis::X, 0.1, {{1, 0.0, 1.0}})}};
}

/// No reflection symmetry: extra cos 4 pi x harmonic and unequal amplitudes.
inline lagflow::ShearSpec asymmetric() {
  return {{shear(lagflow::ShearAxis::Y, 0.1, {{1, 0.0, 1.0}, {2, 0.5, 0.0}}),
           shear(lagflow::ShearAxis::X, 0.08, {{1, 0.0, 1.0}})}};
}

inline const lagflow::IntMatrix2 kCat{2, 1, 1, 1};

/// Closed forms for the single y-shear u2 = a sin 2 pi x, written in terms
/// of s = d u2/dx and its derivatives. Everything depends on x only.
struct ShearProfile1D {
  double a;
  double s(double x) const { return a * kTau * std::cos(kTau * x); }
  double s1(double x) const { return -a * kTau * kTau * std::sin(kTau * x); }
  double s2(double x) const { return -a * kTau * kTau * kTau * std::cos(kTau * x); }
  double det_g(double x) const { return 4.0 + s(x) * s(x); }
};

template <class Fn>
double max_over_grid(int n, Fn&& fn) {
  double m = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m = std::max(m, std::abs(fn(i, j)));
  return m;
}

inline double order(double coarse, double fine) { return std::log2(coarse / fine); }

}  // namespace fixtures
