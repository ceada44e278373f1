#include "lagflow/tensoralg.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace lagflow {

namespace {

// Contractions run in extended precision: with cond(g) up to 1e3 the cubic
// form |A|^2 loses about three digits in plain double arithmetic.
using real = long double;

struct Mat2 {
  real a, b, c, d;  // [[a, b], [c, d]]
};

Mat2 mul(const Mat2& x, const Mat2& y) {
  return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d, x.c * y.a + x.d * y.c,
          x.c * y.b + x.d * y.d};
}

real trace_of_product(const Mat2& x, const Mat2& y) {
  return x.a * y.a + x.b * y.c + x.c * y.b + x.d * y.d;
}

Mat2 slice(const SymTensor3& h, int k) {
  // (h_ijk)_{ij} for fixed k
  return k == 0 ? Mat2{h.h111, h.h112, h.h112, h.h122} : Mat2{h.h112, h.h122, h.h122, h.h222};
}

void require_eta(double eta) {
  if (!(eta > 0.0) || eta > 1.0 + kEtaTolerance) {
    throw std::domain_error("eta outside (0, 1]: " + std::to_string(eta));
  }
}

}  // namespace

AmbientCurvature curvature_from_int(int c) {
  switch (c) {
    case -1: return AmbientCurvature::Hyperbolic;
    case 0: return AmbientCurvature::Flat;
    case 1: return AmbientCurvature::Spherical;
    default: throw std::domain_error("ambient curvature must be -1, 0 or 1, got " + std::to_string(c));
  }
}

Metric2::Metric2(double g11, double g12, double g22) : g11_(g11), g12_(g12), g22_(g22) {
  // Kahan's difference of products keeps det accurate for ill-conditioned metrics.
  const double w = g12 * g12;
  det_ = std::fma(g11, g22, -w) + std::fma(-g12, g12, w);
  if (!(g11 > 0.0) || !(det_ > 0.0) || !std::isfinite(det_)) {
    throw std::domain_error("metric is not positive definite");
  }
  inv_ = {g22 / det_, -g12 / det_, g11 / det_};
}

double Metric2::inner_covectors(const Vec2& a, const Vec2& b) const {
  return inv_.g11 * a[0] * b[0] + inv_.g12 * (a[0] * b[1] + a[1] * b[0]) + inv_.g22 * a[1] * b[1];
}

double Metric2::max_inverse_eigenvalue() const {
  const double half_tr = 0.5 * (inv_.g11 + inv_.g22);
  const double half_diff = 0.5 * (inv_.g11 - inv_.g22);
  return half_tr + std::sqrt(half_diff * half_diff + inv_.g12 * inv_.g12);
}

Norms norms(const SymTensor3& h, const Metric2& g) {
  const real det = static_cast<real>(g.g11()) * g.g22() - static_cast<real>(g.g12()) * g.g12();
  const struct {
    real g11, g12, g22;
  } gi{g.g22() / det, -g.g12() / det, g.g11() / det};
  const Mat2 ginv{gi.g11, gi.g12, gi.g12, gi.g22};
  const Mat2 q0 = mul(ginv, slice(h, 0));
  const Mat2 q1 = mul(ginv, slice(h, 1));

  Norms out;
  const real H1 = q0.a + q0.d, H2 = q1.a + q1.d;
  out.H = {static_cast<double>(H1), static_cast<double>(H2)};

  CurvatureScalars& s = out.scalars;
  s.A2 = static_cast<double>(gi.g11 * trace_of_product(q0, q0) + 2 * gi.g12 * trace_of_product(q0, q1) +
                             gi.g22 * trace_of_product(q1, q1));
  const real Hup[2] = {gi.g11 * H1 + gi.g12 * H2, gi.g12 * H1 + gi.g22 * H2};
  s.H2 = static_cast<double>(Hup[0] * H1 + Hup[1] * H2);

  // B_ij = H^k h_kij; cross = tr((g^{-1} B)^2)
  const Mat2 gb{Hup[0] * q0.a + Hup[1] * q1.a, Hup[0] * q0.b + Hup[1] * q1.b,
                Hup[0] * q0.c + Hup[1] * q1.c, Hup[0] * q0.d + Hup[1] * q1.d};
  s.cross = static_cast<double>(trace_of_product(gb, gb));

  // Exact zeros can come out as -0 or tiny negatives through cancellation.
  s.A2 = std::max(s.A2, 0.0);
  s.H2 = std::max(s.H2, 0.0);
  s.cross = std::max(s.cross, 0.0);
  return out;
}

double check_h_inequality(const SymTensor3& h, const Metric2& g) {
  const CurvatureScalars s = norms(h, g).scalars;
  return (4.0 / 3.0) * s.A2 - s.H2;
}

double check_cauchy_schwarz(const SymTensor3& h, const Metric2& g) {
  const CurvatureScalars s = norms(h, g).scalars;
  return s.H2 * s.A2 - s.cross;
}

IdentitySides square_completion_identity(double eta, double H, const Vec2& grad_eta,
                                         const Vec2& grad_H, const Metric2& g) {
  if (!(eta > 0.0)) throw std::domain_error("square completion needs eta > 0");
  const double eta3 = eta * eta * eta;
  const double cross = g.inner_covectors(grad_eta, grad_H);
  const double ge2 = g.inner_covectors(grad_eta, grad_eta);
  const double gH2 = g.inner_covectors(grad_H, grad_H);

  IdentitySides out;
  out.lhs = (4.0 * eta * H * cross - 2.0 * ge2 * H * H - 2.0 * eta * eta * gH2) / eta3;
  const Vec2 w{grad_eta[0] * H - eta * grad_H[0], grad_eta[1] * H - eta * grad_H[1]};
  out.rhs = -2.0 * g.inner_covectors(w, w) / eta3;
  return out;
}

double eta_rhs(double eta, double A2, double H2, double lap_eta, AmbientCurvature c) {
  require_eta(eta);
  return lap_eta + eta * (2.0 * A2 - H2) + as_real(c) * eta * (1.0 - eta * eta);
}

double eta_rhs_lower(double eta, double A2, double lap_eta, AmbientCurvature c) {
  require_eta(eta);
  return lap_eta + (2.0 / 3.0) * A2 * eta + as_real(c) * eta * (1.0 - eta * eta);
}

double H2_rhs(double H2, double grad_H_norm2, double cross, double eta, AmbientCurvature c) {
  require_eta(eta);
  if (H2 < 0.0 || grad_H_norm2 < 0.0 || cross < 0.0) {
    throw std::domain_error("H2_rhs: squared norms must be nonnegative");
  }
  return -2.0 * grad_H_norm2 + 2.0 * cross + as_real(c) * (2.0 - eta * eta) * H2;
}

double eta_lower_bound(double min_eta0, AmbientCurvature c, double t) {
  if (!(min_eta0 > 0.0)) throw std::domain_error("eta_lower_bound: min eta must be positive");
  if (min_eta0 > 1.0 + kEtaTolerance) throw std::domain_error("eta_lower_bound: min eta above 1");
  if (t < 0.0) throw std::domain_error("eta_lower_bound: negative time");
  if (c == AmbientCurvature::Flat) return min_eta0;

  const double m = std::min(min_eta0, 1.0 - 1e-12);
  const double alpha = m / std::sqrt(1.0 - m * m);
  const double growth = alpha * std::exp(as_real(c) * t);
  if (std::isinf(growth)) return 1.0;
  return growth / std::sqrt(1.0 + growth * growth);
}

}  // namespace lagflow
