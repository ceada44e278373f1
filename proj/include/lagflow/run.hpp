#pragma once

// Time loop: steps the flow, emits diagnostics at a fixed step cadence,
// samples equation residuals, writes snapshots, and stops at t_end or when
// sup |H| stays below kConvergedSupH for kConvergedRecords records.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "lagflow/diagnostics.hpp"
#include "lagflow/flow.hpp"
#include "lagflow/snapshot.hpp"

namespace lagflow {

inline constexpr double kConvergedSupH = 1e-5;
inline constexpr int kConvergedRecords = 10;

struct RunOptions {
  StepControl control;
  double t_end = 0.0;
  int diag_every = 1;       // steps between records
  int snapshot_every = 0;   // steps between snapshots, 0 = final only
  int residual_every = 0;   // records between residual samples, 0 = off
  std::function<void(const DiagnosticsRecord&)> on_record;
  std::function<void(const Snapshot&)> on_snapshot;

  void validate() const;
};

enum class RunStatus { ReachedEnd, Converged, Failed };

struct RunResult {
  RunStatus status = RunStatus::ReachedEnd;
  std::vector<DiagnosticsRecord> records;
  FlowState final_state;  // last good state when the integration failed
  std::int32_t converged_records = 0;
  std::string failure;
};

/// Integrates from a fresh initial state (its first record counts toward
/// convergence).
RunResult run(const FlowState& initial, const RunOptions& options);

/// Continues from a snapshot. The first record repeats the snapshot's state
/// and does not count toward convergence again.
RunResult resume(const Snapshot& snapshot, const RunOptions& options);

}  // namespace lagflow
