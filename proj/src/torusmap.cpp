#include "lagflow/torusmap.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace lagflow {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap_unit(double v) {
  const double w = v - std::floor(v);
  return w >= 1.0 ? 0.0 : w;
}
}  // namespace

double Profile::value(double s) const {
  double v = 0.0;
  for (const auto& t : terms) {
    const double arg = kTwoPi * t.k * s;
    v += t.cos_coef * std::cos(arg) + t.sin_coef * std::sin(arg);
  }
  return v;
}

double Profile::d1(double s) const {
  double v = 0.0;
  for (const auto& t : terms) {
    const double w = kTwoPi * t.k;
    v += w * (t.sin_coef * std::cos(w * s) - t.cos_coef * std::sin(w * s));
  }
  return v;
}

double Profile::d2(double s) const {
  double v = 0.0;
  for (const auto& t : terms) {
    const double w = kTwoPi * t.k;
    v -= w * w * (t.cos_coef * std::cos(w * s) + t.sin_coef * std::sin(w * s));
  }
  return v;
}

Vec2 Shear::apply(const Vec2& p) const {
  if (axis == ShearAxis::X) return {p[0] + amplitude * profile.value(p[1]), p[1]};
  return {p[0], p[1] + amplitude * profile.value(p[0])};
}

Mat2 Shear::jacobian(const Vec2& p) const {
  if (axis == ShearAxis::X) return {1.0, amplitude * profile.d1(p[1]), 0.0, 1.0};
  return {1.0, 0.0, amplitude * profile.d1(p[0]), 1.0};
}

TorusMap::TorusMap(IntMatrix2 linear, GridField u1, GridField u2)
    : linear_(linear), u1_(std::move(u1)), u2_(std::move(u2)) {
  if (linear_.det() != 1) throw std::invalid_argument("linear part must have determinant 1");
  if (u1_.n() != u2_.n()) throw std::invalid_argument("displacement components differ in size");
  require_grid_size(u1_.n());
}

TorusMap TorusMap::identity(int n) { return TorusMap({}, GridField(n), GridField(n)); }

TorusMap TorusMap::linear_map(int n, IntMatrix2 linear) {
  return TorusMap(linear, GridField(n), GridField(n));
}

Vec2 TorusMap::eval(int i, int j) const {
  const double x = static_cast<double>(i) / n();
  const double y = static_cast<double>(j) / n();
  return {wrap_unit(linear_.a11 * x + linear_.a12 * y + u1_(i, j)),
          wrap_unit(linear_.a21 * x + linear_.a22 * y + u2_(i, j))};
}

TorusMap make_shear_composition(const ShearSpec& spec, int n) {
  GridField u1(n), u2(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const Vec2 x{static_cast<double>(i) / n, static_cast<double>(j) / n};
      Vec2 p = x;
      for (const auto& s : spec.shears) p = s.apply(p);
      u1(i, j) = p[0] - x[0];
      u2(i, j) = p[1] - x[1];
    }
  }
  return TorusMap({}, std::move(u1), std::move(u2));
}

JacobianField analytic_jacobian(const ShearSpec& spec, int n) {
  JacobianField out(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      Vec2 p{static_cast<double>(i) / n, static_cast<double>(j) / n};
      Mat2 d = Mat2::identity();
      for (const auto& s : spec.shears) {
        d = s.jacobian(p) * d;
        p = s.apply(p);
      }
      out(i, j) = d;
    }
  }
  return out;
}

JacobianField jacobian(const TorusMap& map) {
  const int n = map.n();
  const GridField u1x = diff(map.u1(), Axis::X), u1y = diff(map.u1(), Axis::Y);
  const GridField u2x = diff(map.u2(), Axis::X), u2y = diff(map.u2(), Axis::Y);
  const Mat2 lin = map.linear().as_real();
  JacobianField out(n);
  for (std::size_t k = 0; k < out.size(); ++k) {
    out[k] = {lin.a11 + u1x[k], lin.a12 + u1y[k], lin.a21 + u2x[k], lin.a22 + u2y[k]};
  }
  return out;
}

double det_drift(const JacobianField& jac) {
  double m = 0.0;
  for (const Mat2& d : jac) m = std::max(m, std::abs(d.det() - 1.0));
  return m;
}

double det_drift(const TorusMap& map) { return det_drift(jacobian(map)); }

}  // namespace lagflow
