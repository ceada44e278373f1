#include "lagflow/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace lagflow {

namespace {

double uniform_dt(const FlowState& prev, const FlowState& mid, const FlowState& next) {
  const double dt1 = mid.dt_last();
  const double dt2 = next.dt_last();
  if (!(dt1 > 0.0) || std::abs(dt1 - dt2) > 1e-12 * dt1 || next.step() != mid.step() + 1 ||
      mid.step() != prev.step() + 1) {
    throw std::invalid_argument("residuals need three consecutive states with uniform dt");
  }
  return dt1;
}

// out = (next - prev) / (2 dt) - T^k d_k phi, the material time derivative of
// a geometric scalar under the normal-velocity flow.
GridField material_derivative(const GridField& prev, const GridField& mid, const GridField& next, double dt,
                              const FlowState& state, GaugeCorrection gauge) {
  GridField out(mid.n());
  for (std::size_t p = 0; p < out.size(); ++p) out[p] = (next[p] - prev[p]) / (2.0 * dt);
  if (gauge == GaugeCorrection::On) {
    const VectorField T = tangential_velocity(state);
    const GridField dx = diff(mid, Axis::X);
    const GridField dy = diff(mid, Axis::Y);
    for (std::size_t p = 0; p < out.size(); ++p) out[p] -= T[0][p] * dx[p] + T[1][p] * dy[p];
  }
  return out;
}

}  // namespace

DiagnosticsRecord measure(const FlowState& state) {
  const GeometryCache& geom = state.geometry();
  const GridField eta = geom.eta_field();
  const GridField H2 = geom.H2_field();
  const GridField A2 = geom.A2_field();

  GridField H2_over_eta(state.n());
  for (std::size_t p = 0; p < H2.size(); ++p) H2_over_eta[p] = H2[p] / eta[p];

  DiagnosticsRecord rec;
  rec.t = state.t();
  rec.min_eta = geom.min_eta();
  rec.M = integrate(H2_over_eta, geom);
  rec.I_H2 = integrate(H2, geom);
  rec.I_A2 = integrate(A2, geom);
  rec.sup_A2 = max_abs(A2);
  rec.sup_H = std::sqrt(max_abs(H2));
  rec.gauss_gap = std::abs(rec.I_A2 - rec.I_H2);
  rec.det_drift = geom.det_drift();
  rec.sym_defect = geom.max_symmetry_defect();
  rec.dt = state.dt_last();
  return rec;
}

const std::vector<std::string>& csv_columns() {
  static const std::vector<std::string> cols{"t",         "min_eta",   "M",          "I_H2",
                                             "I_A2",      "sup_A2",    "sup_H",      "gauss_gap",
                                             "det_drift", "sym_defect", "residual_eq1", "residual_eq4",
                                             "dt"};
  return cols;
}

void write_csv_header(std::ostream& out) {
  const auto& cols = csv_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
  out << '\n';
}

void write_csv_row(std::ostream& out, const DiagnosticsRecord& r) {
  std::ostringstream row;
  row << std::setprecision(17);
  const double values[] = {r.t,         r.min_eta,   r.M,          r.I_H2,         r.I_A2,
                           r.sup_A2,    r.sup_H,     r.gauss_gap,  r.det_drift,    r.sym_defect,
                           r.residual_eq1, r.residual_eq4, r.dt};
  bool first = true;
  for (double v : values) {
    if (!first) row << ',';
    first = false;
    if (std::isnan(v)) {
      row << "nan";
    } else {
      row << v;
    }
  }
  out << row.str() << '\n';
}

void write_csv(const std::filesystem::path& path, const std::vector<DiagnosticsRecord>& records) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string());
  write_csv_header(out);
  for (const auto& r : records) write_csv_row(out, r);
}

MonotonicityReport check_monotonicity(const std::vector<DiagnosticsRecord>& records, AmbientCurvature c) {
  MonotonicityReport rep;
  if (records.size() < 2) return rep;
  for (std::size_t i = 0; i + 1 < records.size(); ++i) {
    const double growth = std::exp(as_real(c) * (records[i + 1].t - records[i].t));
    const double v = std::max(0.0, records[i + 1].M - records[i].M * growth);
    rep.violations.push_back(v);
    rep.max_violation = std::max(rep.max_violation, v);
    rep.total_violation += v;
  }
  return rep;
}

EtaBoundReport check_eta_lower_bound(const std::vector<DiagnosticsRecord>& records, AmbientCurvature c) {
  EtaBoundReport rep;
  if (records.empty()) return rep;
  const double m0 = records.front().min_eta;
  const double t0 = records.front().t;
  bool first = true;
  for (const auto& r : records) {
    const double elapsed = r.t - t0;
    const double margin = r.min_eta - eta_lower_bound(m0, c, elapsed);
    const double scaled = margin / (1.0 + elapsed);
    if (first || margin < rep.worst_margin) rep.worst_margin = margin;
    if (first || scaled < rep.worst_scaled) rep.worst_scaled = scaled;
    first = false;
    if (margin < -kEtaBoundSlack * (1.0 + elapsed)) rep.within_tolerance = false;
  }
  return rep;
}

double residual_eq1(const FlowState& prev, const FlowState& mid, const FlowState& next, AmbientCurvature c,
                    GaugeCorrection gauge) {
  const double dt = uniform_dt(prev, mid, next);
  const GeometryCache& geom = mid.geometry();
  const GridField eta = geom.eta_field();
  const GridField dtd = material_derivative(prev.geometry().eta_field(), eta, next.geometry().eta_field(), dt,
                                            mid, gauge);
  const GridField lap = laplace_beltrami(eta, geom);
  const double cc = as_real(c);
  double worst = 0.0;
  for (std::size_t p = 0; p < eta.size(); ++p) {
    const NodeGeometry& node = geom[p];
    // eta_rhs without its domain guard: discrete eta may exceed 1 by det-drift.
    const double e = eta[p];
    const double rhs = lap[p] + e * (2.0 * node.scalars.A2 - node.scalars.H2) + cc * e * (1.0 - e * e);
    worst = std::max(worst, std::abs(dtd[p] - rhs));
  }
  return worst;
}

double residual_eq4(const FlowState& prev, const FlowState& mid, const FlowState& next, AmbientCurvature c,
                    GaugeCorrection gauge) {
  const double dt = uniform_dt(prev, mid, next);
  const GeometryCache& geom = mid.geometry();
  const GridField H2 = geom.H2_field();
  const GridField dtd =
      material_derivative(prev.geometry().H2_field(), H2, next.geometry().H2_field(), dt, mid, gauge);
  const GridField lap = laplace_beltrami(H2, geom);
  const GridField grad = covariant_grad_H_norm2(geom);
  const double cc = as_real(c);
  double worst = 0.0;
  for (std::size_t p = 0; p < H2.size(); ++p) {
    const NodeGeometry& node = geom[p];
    const double rhs = lap[p] - 2.0 * grad[p] + 2.0 * node.scalars.cross +
                       cc * (2.0 - node.eta * node.eta) * H2[p];
    worst = std::max(worst, std::abs(dtd[p] - rhs));
  }
  return worst;
}

H2DecayReport check_H2_decay(const std::vector<DiagnosticsRecord>& records, AmbientCurvature c) {
  if (c != AmbientCurvature::Flat) throw std::invalid_argument("H2 decay is only checked for flat runs");
  H2DecayReport rep;
  if (records.empty()) return rep;
  const double M0 = records.front().M;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    const double excess = r.I_H2 - r.M;
    const double growth = r.M - M0;
    if (i == 0 || excess > rep.max_sandwich_excess) rep.max_sandwich_excess = excess;
    if (i == 0 || growth > rep.max_growth) rep.max_growth = growth;
    if (excess > 1e-9 * std::max(r.M, 1e-300)) rep.sandwich_holds = false;
    if (growth > 1e-4 * M0) rep.M_bounded = false;
  }
  const double I0 = records.front().I_H2;
  rep.decay_ratio = I0 > 0.0 ? records.back().I_H2 / I0 : 0.0;
  rep.decayed = records.back().I_H2 <= 0.01 * I0;
  return rep;
}

}  // namespace lagflow
