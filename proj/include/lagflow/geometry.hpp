#pragma once

// Differential geometry of the graph {(x, f(x))} inside T^2 x T^2 with the
// flat product metric.
//
// Conventions: F(x) = (x, f(x)) is a local lift to R^4, F_k = dF/dx^k, and the
// complex structure compatible with omega' = omega_1 - omega_2 is
// J'(v, w) = (J0 v, -J0 w) with J0 the rotation by +pi/2. With this choice
// J'F_k is normal exactly when det Df = 1, and
//   h_ijk = <(d_i d_j F)^perp, J'F_k>.

#include <array>

#include "lagflow/grid.hpp"
#include "lagflow/mat2.hpp"
#include "lagflow/tensoralg.hpp"
#include "lagflow/torusmap.hpp"

namespace lagflow {

using Vec4 = std::array<double, 4>;

/// g = I + Df^T Df.
Metric2 induced_metric(const Mat2& df);

/// eta = 2 / sqrt(det g), the Kahler angle of a Lagrangian graph.
double eta(const Metric2& g);

/// det g below this value means the map is no longer area preserving.
inline constexpr double kAreaPreservationFloor = 4.0 - 1e-6;

/// Second derivatives of the two displacement components.
using DisplacementHessian = std::array<Hessian2, 2>;

/// h_ijk before symmetrization; symmetric in (i, j) only.
struct RawSecondFundamentalForm {
  std::array<double, 8> r{};  // index 4 i + 2 j + k

  double operator()(int i, int j, int k) const { return r[4 * i + 2 * j + k]; }
  double& operator()(int i, int j, int k) { return r[4 * i + 2 * j + k]; }

  /// Average over all index permutations.
  SymTensor3 symmetrized() const;
  /// max |r_ijk - sym(r)_ijk|.
  double symmetry_defect() const;
};

RawSecondFundamentalForm second_fundamental_form_raw(const Mat2& df, const DisplacementHessian& d2u,
                                                     const Metric2& g);

struct SecondFundamentalForm {
  SymTensor3 h;
  double symmetry_defect = 0.0;
};

SecondFundamentalForm second_fundamental_form(const Mat2& df, const DisplacementHessian& d2u,
                                              const Metric2& g);

/// Tangent vector F_k in R^4.
Vec4 tangent(const Mat2& df, int k);
/// J'(v, w) = (J0 v, -J0 w).
Vec4 complex_structure(const Vec4& v);

/// Gamma^k_ij with the six independent values stored as gamma[k][i + j].
struct Christoffel {
  std::array<std::array<double, 3>, 2> gamma{};

  double operator()(int k, int i, int j) const { return gamma[k][i + j]; }
};

/// d_l g_ij for l = 0, 1.
struct MetricGradient {
  std::array<Hessian2, 2> d;  // d[l](i, j) = d_l g_ij
};

Christoffel christoffel(const Metric2& g, const MetricGradient& dg);

struct NodeGeometry {
  Mat2 df;
  DisplacementHessian d2u;
  Metric2 g;
  double sqrt_det_g = 2.0;
  double eta = 1.0;
  SymTensor3 h;
  double sym_defect = 0.0;
  MeanCurvCovector H;
  CurvatureScalars scalars;
  Christoffel gamma;
};

/// Mean curvature vector g^{kl} H_k J'F_l at one node.
Vec4 mean_curvature_vector(const NodeGeometry& node);

/// Per-node geometry of one flow slice.
class GeometryCache {
 public:
  explicit GeometryCache(const TorusMap& map);

  int n() const { return nodes_.n(); }
  const NodeGeometry& operator()(int i, int j) const { return nodes_(i, j); }
  const NodeGeometry& operator[](std::size_t k) const { return nodes_[k]; }
  const NodeField<NodeGeometry>& nodes() const { return nodes_; }

  double max_symmetry_defect() const { return max_sym_defect_; }
  double det_drift() const { return det_drift_; }
  /// Nodes where det g fell below kAreaPreservationFloor.
  int flagged_nodes() const { return flagged_; }
  double min_eta() const;

  GridField eta_field() const;
  GridField A2_field() const;
  GridField H2_field() const;
  GridField cross_field() const;
  GridField H_component(int k) const;

 private:
  template <class Fn>
  GridField extract(Fn&& fn) const;

  NodeField<NodeGeometry> nodes_;
  double max_sym_defect_ = 0.0;
  double det_drift_ = 0.0;
  int flagged_ = 0;
};

/// (1/sqrt g) d_i (sqrt g g^{ij} d_j phi) in divergence form.
GridField laplace_beltrami(const GridField& phi, const GeometryCache& geom);

/// |grad H|^2 = g^{ii'} g^{kk'} (nabla_i H_k)(nabla_i' H_k') with the
/// Levi-Civita connection.
GridField covariant_grad_H_norm2(const GeometryCache& geom);

/// sum over nodes of phi sqrt(det g) h^2.
double integrate(const GridField& phi, const GeometryCache& geom);

}  // namespace lagflow
