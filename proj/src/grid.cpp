#include "lagflow/grid.hpp"

#include <algorithm>
#include <cmath>

#include "lagflow/parallel.hpp"

namespace lagflow {

namespace {

// Applies a symmetric/antisymmetric 5-point stencil along one axis.
template <class Stencil>
GridField apply_stencil(const GridField& f, Axis axis, Stencil&& stencil) {
  const int n = f.n();
  GridField out(n);
  const double* src = f.values().data();
  double* dst = out.values().data();
  parallel_for(n, [&](int i0, int i1) {
    for (int i = i0; i < i1; ++i) {
      if (axis == Axis::X) {
        const double* m2 = src + static_cast<std::size_t>((i - 2 + n) % n) * n;
        const double* m1 = src + static_cast<std::size_t>((i - 1 + n) % n) * n;
        const double* c0 = src + static_cast<std::size_t>(i) * n;
        const double* p1 = src + static_cast<std::size_t>((i + 1) % n) * n;
        const double* p2 = src + static_cast<std::size_t>((i + 2) % n) * n;
        double* row = dst + static_cast<std::size_t>(i) * n;
        for (int j = 0; j < n; ++j) row[j] = stencil(m2[j], m1[j], c0[j], p1[j], p2[j]);
      } else {
        const double* r = src + static_cast<std::size_t>(i) * n;
        double* row = dst + static_cast<std::size_t>(i) * n;
        row[0] = stencil(r[n - 2], r[n - 1], r[0], r[1], r[2]);
        row[1] = stencil(r[n - 1], r[0], r[1], r[2], r[3]);
        for (int j = 2; j < n - 2; ++j) row[j] = stencil(r[j - 2], r[j - 1], r[j], r[j + 1], r[j + 2]);
        row[n - 2] = stencil(r[n - 4], r[n - 3], r[n - 2], r[n - 1], r[0]);
        row[n - 1] = stencil(r[n - 3], r[n - 2], r[n - 1], r[0], r[1]);
      }
    }
  });
  return out;
}

}  // namespace

GridField diff(const GridField& f, Axis axis) {
  const double scale = f.n() / 12.0;
  return apply_stencil(f, axis, [scale](double m2, double m1, double, double p1, double p2) {
    return scale * ((m2 - p2) + 8.0 * (p1 - m1));
  });
}

GridField diff2(const GridField& f, Axis axis) {
  const double scale = static_cast<double>(f.n()) * f.n() / 12.0;
  return apply_stencil(f, axis, [scale](double m2, double m1, double c0, double p1, double p2) {
    return scale * (16.0 * (p1 + m1) - (p2 + m2) - 30.0 * c0);
  });
}

GridField sample(int n, const std::function<double(double, double)>& fn) {
  GridField out(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out(i, j) = fn(static_cast<double>(i) / n, static_cast<double>(j) / n);
  return out;
}

double max_abs(const GridField& f) {
  double m = 0.0;
  for (double v : f) m = std::max(m, std::abs(v));
  return m;
}

double compensated_sum(const std::vector<double>& values) {
  double sum = 0.0;
  double carry = 0.0;
  for (double v : values) {
    const double t = sum + v;
    if (std::abs(sum) >= std::abs(v)) {
      carry += (sum - t) + v;
    } else {
      carry += (v - t) + sum;
    }
    sum = t;
  }
  return sum + carry;
}

}  // namespace lagflow
