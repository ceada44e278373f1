#pragma once

// Pointwise tensor algebra on a Lagrangian surface in a four-dimensional
// Kahler product. Everything here works in a coordinate frame with an
// explicit induced metric; no orthonormal frames are built.

#include <array>

namespace lagflow {

using Vec2 = std::array<double, 2>;

/// Sign of the constant curvature of the two factors.
enum class AmbientCurvature : int { Hyperbolic = -1, Flat = 0, Spherical = 1 };

inline double as_real(AmbientCurvature c) { return static_cast<double>(static_cast<int>(c)); }

/// Converts -1/0/1 to AmbientCurvature; throws std::domain_error otherwise.
AmbientCurvature curvature_from_int(int c);

/// Inverse of a 2x2 symmetric positive definite metric.
struct InverseMetric2 {
  double g11 = 0.0, g12 = 0.0, g22 = 0.0;

  double operator()(int i, int j) const {
    if (i != j) return g12;
    return i == 0 ? g11 : g22;
  }
};

/// Induced metric g_ij in the coordinate frame.
class Metric2 {
 public:
  /// Throws std::domain_error unless the metric is positive definite.
  Metric2(double g11, double g12, double g22);
  Metric2() : Metric2(1.0, 0.0, 1.0) {}

  static Metric2 identity() { return Metric2(1.0, 0.0, 1.0); }

  double g11() const { return g11_; }
  double g12() const { return g12_; }
  double g22() const { return g22_; }
  double operator()(int i, int j) const {
    if (i != j) return g12_;
    return i == 0 ? g11_ : g22_;
  }

  double det() const { return det_; }
  const InverseMetric2& inverse() const { return inv_; }

  /// g^{ij} a_i b_j for covectors a, b.
  double inner_covectors(const Vec2& a, const Vec2& b) const;
  /// Largest eigenvalue of g^{ij}.
  double max_inverse_eigenvalue() const;

 private:
  double g11_, g12_, g22_;
  double det_;
  InverseMetric2 inv_;
};

/// Fully symmetric three-tensor h_ijk in two dimensions. Only the four
/// independent components are stored, so every accessor is permutation
/// invariant by construction.
struct SymTensor3 {
  double h111 = 0.0, h112 = 0.0, h122 = 0.0, h222 = 0.0;

  /// Indices are 0-based. The value depends only on how many indices are 1.
  double operator()(int i, int j, int k) const {
    switch (i + j + k) {
      case 0: return h111;
      case 1: return h112;
      case 2: return h122;
      default: return h222;
    }
  }
};

/// H_k = g^{ij} h_ijk.
struct MeanCurvCovector {
  double H1 = 0.0, H2 = 0.0;

  double operator[](int k) const { return k == 0 ? H1 : H2; }
  Vec2 as_vec() const { return {H1, H2}; }
};

struct CurvatureScalars {
  double A2 = 0.0;     // |A|^2
  double H2 = 0.0;     // |H|^2
  double cross = 0.0;  // sum_ij (H^k h_kij)^2, indices raised with g
};

struct Norms {
  CurvatureScalars scalars;
  MeanCurvCovector H;
};

Norms norms(const SymTensor3& h, const Metric2& g);

/// (4/3)|A|^2 - |H|^2, nonnegative for any fully symmetric tensor.
double check_h_inequality(const SymTensor3& h, const Metric2& g);

/// |H|^2 |A|^2 - sum_ij (H^k h_kij)^2.
double check_cauchy_schwarz(const SymTensor3& h, const Metric2& g);

struct IdentitySides {
  double lhs = 0.0;
  double rhs = 0.0;
};

/// Both sides of the square completion used for the monotone quantity:
///   [4 eta H <grad eta, grad H> - 2|grad eta|^2 H^2 - 2 eta^2 |grad H|^2] / eta^3
///   = -2 |H grad eta - eta grad H|^2 / eta^3
/// Gradients are covectors; inner products use g^{ij}. Throws
/// std::domain_error if eta <= 0.
IdentitySides square_completion_identity(double eta, double H, const Vec2& grad_eta,
                                         const Vec2& grad_H, const Metric2& g);

/// Right-hand side of the eta evolution:
///   lap_eta + eta (2 A2 - H2) + c eta (1 - eta^2).
double eta_rhs(double eta, double A2, double H2, double lap_eta, AmbientCurvature c);

/// Lower bound of eta_rhs obtained from H2 <= (4/3) A2.
double eta_rhs_lower(double eta, double A2, double lap_eta, AmbientCurvature c);

/// Reaction part of the |H|^2 evolution:
///   -2 |grad H|^2 + 2 cross + c (2 - eta^2) H2.
double H2_rhs(double H2, double grad_H_norm2, double cross, double eta, AmbientCurvature c);

/// Comparison-principle lower bound for eta at time t given the initial
/// minimum. Returns min_eta0 unchanged when c is flat.
double eta_lower_bound(double min_eta0, AmbientCurvature c, double t);

/// Upper slack allowed on eta above 1.
inline constexpr double kEtaTolerance = 1e-9;

}  // namespace lagflow
