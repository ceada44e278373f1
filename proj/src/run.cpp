#include "lagflow/run.hpp"

#include <stdexcept>

namespace lagflow {

void RunOptions::validate() const {
  control.validate();
  if (t_end < 0.0) throw std::invalid_argument("t_end must be nonnegative");
  if (diag_every < 1) throw std::invalid_argument("diag_every must be >= 1");
  if (snapshot_every < 0) throw std::invalid_argument("snapshot_every must be >= 0");
  if (residual_every < 0) throw std::invalid_argument("residual_every must be >= 0");
}

namespace {

RunResult drive(FlowState state, std::int32_t converged, bool count_first, const RunOptions& opt) {
  opt.validate();
  RunResult res{RunStatus::ReachedEnd, {}, state, converged, {}};
  std::optional<FlowState> prev;

  auto emit = [&](const FlowState& s, bool on_cadence, bool counts) {
    DiagnosticsRecord rec = measure(s);
    const bool residual_due = on_cadence && opt.residual_every > 0 && prev.has_value() &&
                              (s.step() / opt.diag_every) % opt.residual_every == 0;
    if (residual_due) {
      const FlowState next = step_rk4_fixed(s, s.dt_last());
      rec.residual_eq1 = residual_eq1(*prev, s, next);
      rec.residual_eq4 = residual_eq4(*prev, s, next);
    }
    res.records.push_back(rec);
    if (opt.on_record) opt.on_record(rec);
    if (counts) converged = rec.sup_H < kConvergedSupH ? converged + 1 : 0;
  };
  auto snapshot = [&](const FlowState& s) {
    if (opt.on_snapshot) opt.on_snapshot(Snapshot{s.map(), s.t(), s.dt_last(), s.step(), converged});
  };

  const bool first_on_cadence = state.step() % opt.diag_every == 0;
  emit(state, first_on_cadence, count_first && first_on_cadence);
  std::int64_t last_emitted = state.step();

  while (converged < kConvergedRecords && state.t() < opt.t_end) {
    try {
      FlowState next = step_rk4(state, opt.control);
      prev = std::move(state);
      state = std::move(next);
    } catch (const IntegrationError& e) {
      res.status = RunStatus::Failed;
      res.failure = e.what();
      break;
    }
    if (state.step() % opt.diag_every == 0) {
      emit(state, true, true);
      last_emitted = state.step();
    }
    if (opt.snapshot_every > 0 && state.step() % opt.snapshot_every == 0) snapshot(state);
  }

  if (last_emitted != state.step()) emit(state, false, false);
  if (res.status != RunStatus::Failed) {
    res.status = converged >= kConvergedRecords ? RunStatus::Converged : RunStatus::ReachedEnd;
  }
  res.converged_records = converged;
  snapshot(state);
  res.final_state = state;
  return res;
}

}  // namespace

RunResult run(const FlowState& initial, const RunOptions& options) {
  return drive(initial, 0, true, options);
}

RunResult resume(const Snapshot& snapshot, const RunOptions& options) {
  return drive(FlowState(snapshot.map, snapshot.t, snapshot.step, snapshot.dt_last), snapshot.converged_records, false, options);
}

}  // namespace lagflow
