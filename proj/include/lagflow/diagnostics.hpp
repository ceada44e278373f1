#pragma once

// Measurements along a flow: the monotone quantity M = int |H|^2 / eta, the
// lower bound for eta, the Gauss identity int |A|^2 = int |H|^2 on the torus,
// the decay of int |H|^2, and central-difference residuals of the evolution
// equations for eta and |H|^2.

#include <filesystem>
#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

#include "lagflow/flow.hpp"
#include "lagflow/tensoralg.hpp"

namespace lagflow {

struct DiagnosticsRecord {
  static constexpr double kNotSampled = std::numeric_limits<double>::quiet_NaN();

  double t = 0.0;
  double min_eta = 1.0;
  double M = 0.0;     // int |H|^2 / eta
  double I_H2 = 0.0;  // int |H|^2
  double I_A2 = 0.0;  // int |A|^2
  double sup_A2 = 0.0;
  double sup_H = 0.0;
  double gauss_gap = 0.0;  // |I_A2 - I_H2|
  double det_drift = 0.0;
  double sym_defect = 0.0;
  double residual_eq1 = kNotSampled;
  double residual_eq4 = kNotSampled;
  double dt = 0.0;

  /// gauss_gap / I_A2, or 0 when I_A2 vanishes.
  double relative_gauss_gap() const { return I_A2 > 0.0 ? gauss_gap / I_A2 : 0.0; }
};

DiagnosticsRecord measure(const FlowState& state);

/// Column names in output order.
const std::vector<std::string>& csv_columns();
void write_csv_header(std::ostream& out);
/// One row, 17 significant digits; unsampled residuals are written as "nan".
void write_csv_row(std::ostream& out, const DiagnosticsRecord& rec);
void write_csv(const std::filesystem::path& path, const std::vector<DiagnosticsRecord>& records);

struct MonotonicityReport {
  std::vector<double> violations;  // max(0, M_{i+1} - M_i e^{c dt_i})
  double max_violation = 0.0;
  double total_violation = 0.0;
};

/// Gronwall form of dM/dt <= c M. Fewer than two records give an empty report.
MonotonicityReport check_monotonicity(const std::vector<DiagnosticsRecord>& records, AmbientCurvature c);

struct EtaBoundReport {
  double worst_margin = 0.0;   // min_t (min_eta(t) - bound(t))
  double worst_scaled = 0.0;   // min_t margin / (1 + t)
  bool within_tolerance = true;  // margin >= -1e-6 (1 + t) everywhere
};

inline constexpr double kEtaBoundSlack = 1e-6;

EtaBoundReport check_eta_lower_bound(const std::vector<DiagnosticsRecord>& records, AmbientCurvature c);

enum class GaugeCorrection { On, Off };

/// sup-norm residual of the eta evolution at `mid`, using the material
/// derivative (eta_next - eta_prev) / (2 dt) - T^k d_k eta. Throws
/// std::invalid_argument unless the two steps have the same dt.
double residual_eq1(const FlowState& prev, const FlowState& mid, const FlowState& next,
                    AmbientCurvature c = AmbientCurvature::Flat,
                    GaugeCorrection gauge = GaugeCorrection::On);

/// Same protocol for |H|^2 with reaction term
/// -2 |grad H|^2 + 2 sum (H^k h_kij)^2 + c (2 - eta^2) |H|^2.
double residual_eq4(const FlowState& prev, const FlowState& mid, const FlowState& next,
                    AmbientCurvature c = AmbientCurvature::Flat,
                    GaugeCorrection gauge = GaugeCorrection::On);

struct H2DecayReport {
  double max_sandwich_excess = 0.0;  // max (I_H2 - M), should be <= 0
  double max_growth = 0.0;           // max (M(t) - M(0)), should be <= 0
  double decay_ratio = 0.0;          // I_H2(t_end) / I_H2(0), 0 when I_H2(0) = 0
  bool sandwich_holds = true;
  bool M_bounded = true;
  bool decayed = true;  // decay_ratio <= 0.01
};

/// Only the flat case is run numerically; other values throw std::invalid_argument.
H2DecayReport check_H2_decay(const std::vector<DiagnosticsRecord>& records, AmbientCurvature c);

}  // namespace lagflow
