#include "lagflow/flow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "lagflow/parallel.hpp"

namespace lagflow {

namespace {

struct StageResult {
  VectorField velocity;
  double min_eta = 1.0;
  double max_inverse_eig = 0.0;
  bool finite = true;
};

StageResult evaluate(const TorusMap& map) {
  const int n = map.n();
  const std::array<const GridField*, 2> u{&map.u1(), &map.u2()};
  std::array<GridField, 2> ux, uy, uxx, uyy, uxy;
  for (int a = 0; a < 2; ++a) {
    ux[a] = diff(*u[a], Axis::X);
    uy[a] = diff(*u[a], Axis::Y);
    uxx[a] = diff2(*u[a], Axis::X);
    uyy[a] = diff2(*u[a], Axis::Y);
    uxy[a] = diff(uy[a], Axis::X);
  }
  const Mat2 lin = map.linear().as_real();

  StageResult out;
  out.velocity = {GridField(n), GridField(n)};
  std::vector<double> row_min_eta(n, 1.0), row_max_eig(n, 0.0);
  std::vector<char> row_finite(n, 1);

  parallel_for(n, [&](int i0, int i1) {
    for (int i = i0; i < i1; ++i) {
      double min_det = std::numeric_limits<double>::infinity();
      double max_eig = 0.0;
      bool finite = true;
      for (int j = 0; j < n; ++j) {
        const std::size_t k = static_cast<std::size_t>(i) * n + j;
        const double a11 = lin.a11 + ux[0][k], a12 = lin.a12 + uy[0][k];
        const double a21 = lin.a21 + ux[1][k], a22 = lin.a22 + uy[1][k];
        const double g11 = 1.0 + a11 * a11 + a21 * a21;
        const double g12 = a11 * a12 + a21 * a22;
        const double g22 = 1.0 + a12 * a12 + a22 * a22;
        const double det = g11 * g22 - g12 * g12;
        const double i11 = g22 / det, i12 = -g12 / det, i22 = g11 / det;
        for (int a = 0; a < 2; ++a) {
          out.velocity[a][k] = i11 * uxx[a][k] + 2.0 * i12 * uxy[a][k] + i22 * uyy[a][k];
        }
        const double half_tr = 0.5 * (i11 + i22), half_diff = 0.5 * (i11 - i22);
        max_eig = std::max(max_eig, half_tr + std::sqrt(half_diff * half_diff + i12 * i12));
        min_det = std::min(min_det, det);
        finite = finite && std::isfinite(out.velocity[0][k]) && std::isfinite(out.velocity[1][k]) &&
                 std::isfinite(det);
      }
      row_min_eta[i] = 2.0 / std::sqrt(min_det);
      row_max_eig[i] = max_eig;
      row_finite[i] = finite ? 1 : 0;
    }
  });

  for (int i = 0; i < n; ++i) {
    out.min_eta = std::min(out.min_eta, row_min_eta[i]);
    out.max_inverse_eig = std::max(out.max_inverse_eig, row_max_eig[i]);
    out.finite = out.finite && row_finite[i];
  }
  if (!std::isfinite(out.min_eta)) out.finite = false;
  return out;
}

void check_stage(const StageResult& s, const FlowState& state, int stage) {
  if (!s.finite) {
    std::ostringstream msg;
    msg << "non-finite values in RK4 stage " << stage << " at t = " << state.t();
    throw IntegrationError(IntegrationError::Kind::NonFinite, msg.str());
  }
  if (s.min_eta < kMinEtaAbort) {
    std::ostringstream msg;
    msg << "min eta " << s.min_eta << " fell below " << kMinEtaAbort << " at t = " << state.t();
    throw IntegrationError(IntegrationError::Kind::EtaCollapse, msg.str());
  }
}

TorusMap axpy(const TorusMap& base, double scale, const VectorField& k) {
  GridField u1 = base.u1(), u2 = base.u2();
  for (std::size_t p = 0; p < u1.size(); ++p) {
    u1[p] += scale * k[0][p];
    u2[p] += scale * k[1][p];
  }
  return TorusMap(base.linear(), std::move(u1), std::move(u2));
}

FlowState rk4(const FlowState& state, const StageResult& first, double dt) {
  const TorusMap& m = state.map();
  const StageResult s2 = evaluate(axpy(m, 0.5 * dt, first.velocity));
  check_stage(s2, state, 2);
  const StageResult s3 = evaluate(axpy(m, 0.5 * dt, s2.velocity));
  check_stage(s3, state, 3);
  const StageResult s4 = evaluate(axpy(m, dt, s3.velocity));
  check_stage(s4, state, 4);

  GridField u1 = m.u1(), u2 = m.u2();
  const double w = dt / 6.0;
  for (std::size_t p = 0; p < u1.size(); ++p) {
    u1[p] += w * (first.velocity[0][p] + 2.0 * s2.velocity[0][p] + 2.0 * s3.velocity[0][p] + s4.velocity[0][p]);
    u2[p] += w * (first.velocity[1][p] + 2.0 * s2.velocity[1][p] + 2.0 * s3.velocity[1][p] + s4.velocity[1][p]);
  }
  for (std::size_t p = 0; p < u1.size(); ++p) {
    if (!std::isfinite(u1[p]) || !std::isfinite(u2[p])) {
      throw IntegrationError(IntegrationError::Kind::NonFinite, "non-finite displacement after RK4 update");
    }
  }
  return FlowState(TorusMap(m.linear(), std::move(u1), std::move(u2)), state.t() + dt, state.step() + 1, dt);
}

}  // namespace

const GeometryCache& FlowState::geometry() const {
  if (!geom_) geom_ = std::make_shared<const GeometryCache>(map_);
  return *geom_;
}

void StepControl::validate() const {
  if (!(sigma > 0.0) || sigma > 0.5) throw std::invalid_argument("sigma must lie in (0, 0.5]");
}

VectorField velocity(const TorusMap& map) { return evaluate(map).velocity; }

VectorField velocity(const FlowState& state) { return velocity(state.map()); }

double stable_dt(const FlowState& state, const StepControl& control) {
  control.validate();
  const StageResult s = evaluate(state.map());
  const double h = 1.0 / state.n();
  return control.sigma * h * h / s.max_inverse_eig;
}

FlowState step_rk4(const FlowState& state, const StepControl& control) {
  control.validate();
  const StageResult first = evaluate(state.map());
  check_stage(first, state, 1);
  const double h = 1.0 / state.n();
  const double dt = control.sigma * h * h / first.max_inverse_eig;
  return rk4(state, first, dt);
}

FlowState step_rk4_fixed(const FlowState& state, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("time step must be positive");
  const StageResult first = evaluate(state.map());
  check_stage(first, state, 1);
  return rk4(state, first, dt);
}

VectorField tangential_velocity(const FlowState& state) {
  const GeometryCache& geom = state.geometry();
  const VectorField v = velocity(state);
  const int n = state.n();
  VectorField out{GridField(n), GridField(n)};
  for (std::size_t p = 0; p < out[0].size(); ++p) {
    const NodeGeometry& node = geom[p];
    // <V, F_l> with V = (0, 0, v1, v2) and F_l = (e_l, column l of Df)
    const double c0 = v[0][p] * node.df.a11 + v[1][p] * node.df.a21;
    const double c1 = v[0][p] * node.df.a12 + v[1][p] * node.df.a22;
    const InverseMetric2& gi = node.g.inverse();
    out[0][p] = gi.g11 * c0 + gi.g12 * c1;
    out[1][p] = gi.g12 * c0 + gi.g22 * c1;
  }
  return out;
}

double normal_velocity_defect(const FlowState& state) {
  const GeometryCache& geom = state.geometry();
  const VectorField v = velocity(state);
  const VectorField T = tangential_velocity(state);
  double worst = 0.0;
  for (std::size_t p = 0; p < v[0].size(); ++p) {
    const NodeGeometry& node = geom[p];
    const Vec4 f0 = tangent(node.df, 0), f1 = tangent(node.df, 1);
    const Vec4 Hvec = mean_curvature_vector(node);
    const Vec4 V{0.0, 0.0, v[0][p], v[1][p]};
    double sq = 0.0;
    for (int a = 0; a < 4; ++a) {
      const double vperp = V[a] - T[0][p] * f0[a] - T[1][p] * f1[a];
      sq += (vperp - Hvec[a]) * (vperp - Hvec[a]);
    }
    worst = std::max(worst, std::sqrt(sq));
  }
  return worst;
}

}  // namespace lagflow
