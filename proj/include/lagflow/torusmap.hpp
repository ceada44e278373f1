#pragma once

// Maps of the flat torus T^2 = R^2 / Z^2 written as f(x) = L x + u(x) with an
// integer unimodular linear part and a periodic displacement sampled on a grid.

#include <vector>

#include "lagflow/grid.hpp"
#include "lagflow/mat2.hpp"
#include "lagflow/tensoralg.hpp"

namespace lagflow {

/// One term a cos(2 pi k s) + b sin(2 pi k s) of a trigonometric profile.
struct TrigTerm {
  int k = 1;
  double cos_coef = 0.0;
  double sin_coef = 0.0;
};

/// Finite trigonometric polynomial phi(s), periodic with period 1.
struct Profile {
  std::vector<TrigTerm> terms;

  double value(double s) const;
  double d1(double s) const;
  double d2(double s) const;
};

/// Which coordinate a shear displaces.
///   X: (x, y) -> (x + a phi(y), y)
///   Y: (x, y) -> (x, y + a phi(x))
enum class ShearAxis { X, Y };

struct Shear {
  ShearAxis axis = ShearAxis::Y;
  double amplitude = 0.0;
  Profile profile;

  Vec2 apply(const Vec2& p) const;
  Mat2 jacobian(const Vec2& p) const;
};

/// Shears applied in order: the map is S_k o ... o S_1.
struct ShearSpec {
  std::vector<Shear> shears;
};

struct IntMatrix2 {
  int a11 = 1, a12 = 0, a21 = 0, a22 = 1;

  long long det() const { return static_cast<long long>(a11) * a22 - static_cast<long long>(a12) * a21; }
  Mat2 as_real() const { return {double(a11), double(a12), double(a21), double(a22)}; }
  bool operator==(const IntMatrix2&) const = default;
};

class TorusMap {
 public:
  /// Throws std::invalid_argument if det L != 1 or the fields differ in size.
  TorusMap(IntMatrix2 linear, GridField u1, GridField u2);

  static TorusMap identity(int n);
  static TorusMap linear_map(int n, IntMatrix2 linear);

  int n() const { return u1_.n(); }
  const IntMatrix2& linear() const { return linear_; }
  const GridField& u1() const { return u1_; }
  const GridField& u2() const { return u2_; }
  GridField& u1() { return u1_; }
  GridField& u2() { return u2_; }

  /// f at node (i, j), reduced mod 1 to [0, 1)^2.
  Vec2 eval(int i, int j) const;

  bool operator==(const TorusMap&) const = default;

 private:
  IntMatrix2 linear_;
  GridField u1_, u2_;  // unwrapped displacement components
};

using JacobianField = NodeField<Mat2>;

TorusMap make_shear_composition(const ShearSpec& spec, int n);

/// Chain-rule Jacobian of the shear composition at the grid nodes.
JacobianField analytic_jacobian(const ShearSpec& spec, int n);

/// Df = L + Du with fourth-order periodic differences.
JacobianField jacobian(const TorusMap& map);

/// max over nodes of |det Df - 1|.
double det_drift(const JacobianField& jac);
double det_drift(const TorusMap& map);

}  // namespace lagflow
