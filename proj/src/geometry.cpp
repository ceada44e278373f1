#include "lagflow/geometry.hpp"

#include <algorithm>
#include <cmath>

#include "lagflow/parallel.hpp"

namespace lagflow {

namespace {

double dot4(const Vec4& a, const Vec4& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2] + a[3] * b[3]; }

}  // namespace

Metric2 induced_metric(const Mat2& df) {
  return Metric2(1.0 + df.a11 * df.a11 + df.a21 * df.a21, df.a11 * df.a12 + df.a21 * df.a22,
                 1.0 + df.a12 * df.a12 + df.a22 * df.a22);
}

double eta(const Metric2& g) { return 2.0 / std::sqrt(g.det()); }

Vec4 tangent(const Mat2& df, int k) {
  return k == 0 ? Vec4{1.0, 0.0, df.a11, df.a21} : Vec4{0.0, 1.0, df.a12, df.a22};
}

Vec4 complex_structure(const Vec4& v) { return {-v[1], v[0], v[3], -v[2]}; }

SymTensor3 RawSecondFundamentalForm::symmetrized() const {
  const auto& s = *this;
  SymTensor3 h;
  h.h111 = s(0, 0, 0);
  h.h112 = (s(0, 0, 1) + s(0, 1, 0) + s(1, 0, 0)) / 3.0;
  h.h122 = (s(0, 1, 1) + s(1, 0, 1) + s(1, 1, 0)) / 3.0;
  h.h222 = s(1, 1, 1);
  return h;
}

double RawSecondFundamentalForm::symmetry_defect() const {
  const SymTensor3 h = symmetrized();
  double m = 0.0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k) m = std::max(m, std::abs((*this)(i, j, k) - h(i, j, k)));
  return m;
}

RawSecondFundamentalForm second_fundamental_form_raw(const Mat2& df, const DisplacementHessian& d2u,
                                                     const Metric2& g) {
  const std::array<Vec4, 2> F{tangent(df, 0), tangent(df, 1)};
  const std::array<Vec4, 2> JF{complex_structure(F[0]), complex_structure(F[1])};
  const InverseMetric2& gi = g.inverse();

  RawSecondFundamentalForm out;
  for (int i = 0; i < 2; ++i) {
    for (int j = i; j < 2; ++j) {
      const Vec4 b{0.0, 0.0, d2u[0](i, j), d2u[1](i, j)};
      const double c0 = dot4(b, F[0]);
      const double c1 = dot4(b, F[1]);
      const double t0 = gi.g11 * c0 + gi.g12 * c1;
      const double t1 = gi.g12 * c0 + gi.g22 * c1;
      Vec4 normal;
      for (int a = 0; a < 4; ++a) normal[a] = b[a] - t0 * F[0][a] - t1 * F[1][a];
      for (int k = 0; k < 2; ++k) {
        out(i, j, k) = dot4(normal, JF[k]);
        out(j, i, k) = out(i, j, k);
      }
    }
  }
  return out;
}

SecondFundamentalForm second_fundamental_form(const Mat2& df, const DisplacementHessian& d2u,
                                              const Metric2& g) {
  const RawSecondFundamentalForm raw = second_fundamental_form_raw(df, d2u, g);
  return {raw.symmetrized(), raw.symmetry_defect()};
}

Christoffel christoffel(const Metric2& g, const MetricGradient& dg) {
  const InverseMetric2& gi = g.inverse();
  Christoffel out;
  for (int i = 0; i < 2; ++i) {
    for (int j = i; j < 2; ++j) {
      // lowered: Gamma_{l,ij} = (d_i g_jl + d_j g_il - d_l g_ij) / 2
      std::array<double, 2> lowered{};
      for (int l = 0; l < 2; ++l) lowered[l] = 0.5 * (dg.d[i](j, l) + dg.d[j](i, l) - dg.d[l](i, j));
      for (int k = 0; k < 2; ++k) out.gamma[k][i + j] = gi(k, 0) * lowered[0] + gi(k, 1) * lowered[1];
    }
  }
  return out;
}

Vec4 mean_curvature_vector(const NodeGeometry& node) {
  const InverseMetric2& gi = node.g.inverse();
  const double up0 = gi.g11 * node.H.H1 + gi.g12 * node.H.H2;
  const double up1 = gi.g12 * node.H.H1 + gi.g22 * node.H.H2;
  const Vec4 j0 = complex_structure(tangent(node.df, 0));
  const Vec4 j1 = complex_structure(tangent(node.df, 1));
  Vec4 out;
  for (int a = 0; a < 4; ++a) out[a] = up0 * j0[a] + up1 * j1[a];
  return out;
}

GeometryCache::GeometryCache(const TorusMap& map) : nodes_(map.n()) {
  const int n = map.n();
  const JacobianField df = jacobian(map);

  std::array<GridField, 2> uxx, uyy, uxy;
  const std::array<const GridField*, 2> u{&map.u1(), &map.u2()};
  for (int a = 0; a < 2; ++a) {
    uxx[a] = diff2(*u[a], Axis::X);
    uyy[a] = diff2(*u[a], Axis::Y);
    uxy[a] = diff(diff(*u[a], Axis::Y), Axis::X);
  }

  GridField g11(n), g12(n), g22(n);
  for (std::size_t k = 0; k < nodes_.size(); ++k) {
    const Metric2 g = induced_metric(df[k]);
    g11[k] = g.g11();
    g12[k] = g.g12();
    g22[k] = g.g22();
  }
  const std::array<GridField, 3> gx{diff(g11, Axis::X), diff(g12, Axis::X), diff(g22, Axis::X)};
  const std::array<GridField, 3> gy{diff(g11, Axis::Y), diff(g12, Axis::Y), diff(g22, Axis::Y)};

  parallel_for(n, [&](int i0, int i1) {
    for (std::size_t k = static_cast<std::size_t>(i0) * n; k < static_cast<std::size_t>(i1) * n; ++k) {
      NodeGeometry& node = nodes_[k];
      node.df = df[k];
      for (int a = 0; a < 2; ++a) node.d2u[a] = {uxx[a][k], uxy[a][k], uyy[a][k]};
      node.g = Metric2(g11[k], g12[k], g22[k]);
      node.sqrt_det_g = std::sqrt(node.g.det());
      node.eta = 2.0 / node.sqrt_det_g;
      const SecondFundamentalForm sff = second_fundamental_form(node.df, node.d2u, node.g);
      node.h = sff.h;
      node.sym_defect = sff.symmetry_defect;
      const Norms nm = norms(node.h, node.g);
      node.H = nm.H;
      node.scalars = nm.scalars;
      MetricGradient dg;
      dg.d[0] = {gx[0][k], gx[1][k], gx[2][k]};
      dg.d[1] = {gy[0][k], gy[1][k], gy[2][k]};
      node.gamma = christoffel(node.g, dg);
    }
  });

  for (const NodeGeometry& node : nodes_) {
    max_sym_defect_ = std::max(max_sym_defect_, node.sym_defect);
    det_drift_ = std::max(det_drift_, std::abs(node.df.det() - 1.0));
    if (node.g.det() < kAreaPreservationFloor) ++flagged_;
  }
}

double GeometryCache::min_eta() const {
  double m = nodes_[0].eta;
  for (const NodeGeometry& node : nodes_) m = std::min(m, node.eta);
  return m;
}

template <class Fn>
GridField GeometryCache::extract(Fn&& fn) const {
  GridField out(n());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = fn(nodes_[k]);
  return out;
}

GridField GeometryCache::eta_field() const {
  return extract([](const NodeGeometry& g) { return g.eta; });
}
GridField GeometryCache::A2_field() const {
  return extract([](const NodeGeometry& g) { return g.scalars.A2; });
}
GridField GeometryCache::H2_field() const {
  return extract([](const NodeGeometry& g) { return g.scalars.H2; });
}
GridField GeometryCache::cross_field() const {
  return extract([](const NodeGeometry& g) { return g.scalars.cross; });
}
GridField GeometryCache::H_component(int k) const {
  return extract([k](const NodeGeometry& g) { return g.H[k]; });
}

GridField laplace_beltrami(const GridField& phi, const GeometryCache& geom) {
  const GridField px = diff(phi, Axis::X);
  const GridField py = diff(phi, Axis::Y);
  GridField fx(phi.n()), fy(phi.n());
  for (std::size_t k = 0; k < phi.size(); ++k) {
    const NodeGeometry& node = geom[k];
    const InverseMetric2& gi = node.g.inverse();
    fx[k] = node.sqrt_det_g * (gi.g11 * px[k] + gi.g12 * py[k]);
    fy[k] = node.sqrt_det_g * (gi.g12 * px[k] + gi.g22 * py[k]);
  }
  const GridField dfx = diff(fx, Axis::X);
  const GridField dfy = diff(fy, Axis::Y);
  GridField out(phi.n());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = (dfx[k] + dfy[k]) / geom[k].sqrt_det_g;
  return out;
}

GridField covariant_grad_H_norm2(const GeometryCache& geom) {
  const GridField H0 = geom.H_component(0);
  const GridField H1 = geom.H_component(1);
  // dH[k][i] = d_i H_k
  const std::array<std::array<GridField, 2>, 2> dH{
      std::array<GridField, 2>{diff(H0, Axis::X), diff(H0, Axis::Y)},
      std::array<GridField, 2>{diff(H1, Axis::X), diff(H1, Axis::Y)}};
  GridField out(geom.n());
  for (std::size_t p = 0; p < out.size(); ++p) {
    const NodeGeometry& node = geom[p];
    double nab[2][2];  // nab[i][k] = nabla_i H_k
    for (int i = 0; i < 2; ++i)
      for (int k = 0; k < 2; ++k)
        nab[i][k] = dH[k][i][p] - node.gamma(0, i, k) * node.H.H1 - node.gamma(1, i, k) * node.H.H2;
    const InverseMetric2& gi = node.g.inverse();
    double sum = 0.0;
    for (int i = 0; i < 2; ++i)
      for (int ip = 0; ip < 2; ++ip)
        for (int k = 0; k < 2; ++k)
          for (int kp = 0; kp < 2; ++kp) sum += gi(i, ip) * gi(k, kp) * nab[i][k] * nab[ip][kp];
    out[p] = std::max(sum, 0.0);
  }
  return out;
}

double integrate(const GridField& phi, const GeometryCache& geom) {
  const double area = phi.spacing() * phi.spacing();
  std::vector<double> terms(phi.size());
  for (std::size_t k = 0; k < phi.size(); ++k) terms[k] = phi[k] * geom[k].sqrt_det_g * area;
  // Sorting makes the sum a function of the multiset of nodal terms, so
  // translating the grid leaves every integral bitwise unchanged.
  std::sort(terms.begin(), terms.end());
  return compensated_sum(terms);
}

}  // namespace lagflow
