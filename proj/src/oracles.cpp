#include "lagflow/oracles.hpp"

#include <cmath>

namespace lagflow::oracle {

namespace {

using V4 = std::array<double, 4>;

double dot(const V4& a, const V4& b) {
  double s = 0.0;
  for (int i = 0; i < 4; ++i) s += a[i] * b[i];
  return s;
}

V4 axpy(const V4& x, double a, const V4& y) {
  V4 out;
  for (int i = 0; i < 4; ++i) out[i] = x[i] + a * y[i];
  return out;
}

V4 scaled(const V4& x, double a) {
  V4 out;
  for (int i = 0; i < 4; ++i) out[i] = a * x[i];
  return out;
}

}  // namespace

Norms naive_norms(const SymTensor3& h, double g11, double g12, double g22) {
  // Extended precision so the reference is the more accurate side.
  const long double det = static_cast<long double>(g11) * g22 - static_cast<long double>(g12) * g12;
  const long double gi[2][2] = {{static_cast<long double>(g22) / det, -static_cast<long double>(g12) / det}, {-static_cast<long double>(g12) / det, static_cast<long double>(g11) / det}};

  long double A2 = 0.0L;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        for (int a = 0; a < 2; ++a)
          for (int b = 0; b < 2; ++b)
            for (int c = 0; c < 2; ++c) A2 += gi[i][a] * gi[j][b] * gi[k][c] * h(i, j, k) * h(a, b, c);

  long double H[2] = {0.0, 0.0};
  for (int k = 0; k < 2; ++k)
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) H[k] += gi[i][j] * h(i, j, k);

  long double H2 = 0.0L;
  long double Hup[2] = {0.0, 0.0};
  for (int k = 0; k < 2; ++k)
    for (int l = 0; l < 2; ++l) {
      H2 += gi[k][l] * H[k] * H[l];
      Hup[k] += gi[k][l] * H[l];
    }

  long double B[2][2] = {};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k) B[i][j] += Hup[k] * h(k, i, j);

  long double cross = 0.0L;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) cross += gi[i][a] * gi[j][b] * B[i][j] * B[a][b];

  Norms out;
  out.H = {static_cast<double>(H[0]), static_cast<double>(H[1])};
  out.scalars = {static_cast<double>(A2), static_cast<double>(H2), static_cast<double>(cross)};
  return out;
}

RawSecondFundamentalForm frame_second_fundamental_form(const Mat2& df, const DisplacementHessian& d2u) {
  const V4 F0{1.0, 0.0, df.a11, df.a21};
  const V4 F1{0.0, 1.0, df.a12, df.a22};

  // orthonormal tangent frame
  const V4 e0 = scaled(F0, 1.0 / std::sqrt(dot(F0, F0)));
  V4 e1 = axpy(F1, -dot(F1, e0), e0);
  e1 = scaled(e1, 1.0 / std::sqrt(dot(e1, e1)));

  // orthonormal normal frame from the coordinate axes of R^4
  V4 frame[4] = {e0, e1, {}, {}};
  int found = 2;
  for (int axis = 0; axis < 4 && found < 4; ++axis) {
    V4 v{};
    v[axis] = 1.0;
    for (int f = 0; f < found; ++f) v = axpy(v, -dot(v, frame[f]), frame[f]);
    // second pass for stability
    for (int f = 0; f < found; ++f) v = axpy(v, -dot(v, frame[f]), frame[f]);
    const double len = std::sqrt(dot(v, v));
    if (len > 0.2) frame[found++] = scaled(v, 1.0 / len);
  }
  const V4& nu0 = frame[2];
  const V4& nu1 = frame[3];

  // J'(v, w) = (J0 v, -J0 w), J0 (a, b) = (-b, a)
  auto jprime = [](const V4& v) { return V4{-v[1], v[0], v[3], -v[2]}; };
  const V4 JF[2] = {jprime(F0), jprime(F1)};

  RawSecondFundamentalForm out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      const V4 b{0.0, 0.0, d2u[0](i, j), d2u[1](i, j)};
      const V4 second = axpy(scaled(nu0, dot(b, nu0)), dot(b, nu1), nu1);
      for (int k = 0; k < 2; ++k) out(i, j, k) = dot(second, JF[k]);
    }
  return out;
}

SymTensor3 equality_tensor(const Vec2& H, double g11, double g12, double g22) {
  const double g[2][2] = {{g11, g12}, {g12, g22}};
  auto comp = [&](int i, int j, int k) { return 0.25 * (H[i] * g[j][k] + H[j] * g[i][k] + H[k] * g[i][j]); };
  return {comp(0, 0, 0), comp(0, 0, 1), comp(0, 1, 1), comp(1, 1, 1)};
}

SymTensor3 rank_one_tensor(const Vec2& v) {
  return {v[0] * v[0] * v[0], v[0] * v[0] * v[1], v[0] * v[1] * v[1], v[1] * v[1] * v[1]};
}

}  // namespace lagflow::oracle
