#pragma once

// Mean curvature flow of a graph over the torus in graph gauge: the
// displacement u evolves by du/dt = g^{ij} d_i d_j f, whose normal part is the
// mean curvature vector. The remaining tangential part T is exposed so that
// equations written for the normal-velocity flow can be checked.

#include <array>
#include <cstdint>
#include <memory>
#include <stdexcept>

#include "lagflow/geometry.hpp"
#include "lagflow/torusmap.hpp"

namespace lagflow {

using VectorField = std::array<GridField, 2>;

class FlowState {
 public:
  explicit FlowState(TorusMap map, double t = 0.0, std::int64_t step = 0, double dt_last = 0.0)
      : map_(std::move(map)), t_(t), step_(step), dt_last_(dt_last) {}

  const TorusMap& map() const { return map_; }
  double t() const { return t_; }
  std::int64_t step() const { return step_; }
  double dt_last() const { return dt_last_; }
  int n() const { return map_.n(); }

  /// Geometry of the current map, built on first use.
  const GeometryCache& geometry() const;

 private:
  TorusMap map_;
  double t_;
  std::int64_t step_;
  double dt_last_;
  mutable std::shared_ptr<const GeometryCache> geom_;
};

struct StepControl {
  double sigma = 0.2;  // dt = sigma h^2 / max eig(g^{-1})

  void validate() const;
};

/// Raised when a stage produces NaN/Inf or the graph is about to degenerate.
class IntegrationError : public std::runtime_error {
 public:
  enum class Kind { NonFinite, EtaCollapse };
  IntegrationError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

inline constexpr double kMinEtaAbort = 1e-3;

/// du/dt = g^{ij} d_i d_j u, componentwise.
VectorField velocity(const TorusMap& map);
VectorField velocity(const FlowState& state);

/// CFL time step for the given state.
double stable_dt(const FlowState& state, const StepControl& control);

/// One classical RK4 step with the CFL time step.
FlowState step_rk4(const FlowState& state, const StepControl& control);

/// One classical RK4 step with a prescribed dt.
FlowState step_rk4_fixed(const FlowState& state, double dt);

/// T^k = g^{kl} <V, F_l> for V = (0, du/dt).
VectorField tangential_velocity(const FlowState& state);

/// max over nodes of |V^perp - H_vec| in R^4.
double normal_velocity_defect(const FlowState& state);

}  // namespace lagflow
