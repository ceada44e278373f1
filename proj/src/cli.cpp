#include "lagflow/cli.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>

#include "json.hpp"
#include "lagflow/config.hpp"
#include "lagflow/run.hpp"
#include "lagflow/snapshot.hpp"

namespace lagflow {

namespace {

using nlohmann::json;

std::string snapshot_name(std::int64_t step) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "snapshot_%08lld.bin", static_cast<long long>(step));
  return buf;
}

void write_json(const std::filesystem::path& path, const json& doc) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << doc.dump(2) << '\n';
}

const char* status_name(RunStatus s) {
  switch (s) {
    case RunStatus::ReachedEnd: return "reached_t_end";
    case RunStatus::Converged: return "converged";
    case RunStatus::Failed: return "integration_failed";
  }
  return "unknown";
}

// Runs the flow, writes diagnostics.csv, snapshots and report.json, and
// decides the exit code.
int execute(const RunConfig& cfg, const std::optional<Snapshot>& start, std::ostream& log) {
  std::filesystem::create_directories(cfg.out_dir);

  std::ofstream csv(cfg.out_dir / "diagnostics.csv");
  if (!csv) throw std::runtime_error("cannot write " + (cfg.out_dir / "diagnostics.csv").string());
  write_csv_header(csv);

  std::optional<Snapshot> last;
  RunOptions opt;
  opt.control.sigma = cfg.sigma;
  opt.t_end = cfg.t_end;
  opt.diag_every = cfg.diag_every;
  opt.snapshot_every = cfg.snapshot_every;
  opt.residual_every = cfg.residual_every;
  opt.on_record = [&](const DiagnosticsRecord& rec) {
    write_csv_row(csv, rec);
    csv.flush();
  };
  opt.on_snapshot = [&](const Snapshot& snap) {
    write_snapshot(cfg.out_dir / snapshot_name(snap.step), snap);
    last = snap;
  };

  const RunResult res = start ? resume(*start, opt) : run(FlowState(initial_map(cfg)), opt);
  if (last) write_snapshot(cfg.out_dir / "final.bin", *last);

  const auto c = AmbientCurvature::Flat;
  const MonotonicityReport mono = check_monotonicity(res.records, c);
  const EtaBoundReport bound = check_eta_lower_bound(res.records, c);
  const H2DecayReport decay = check_H2_decay(res.records, c);
  const double M0 = res.records.front().M;
  const double mono_tol = kMonotonicityTolerance * M0;

  double max_gap = 0.0, max_r1 = 0.0, max_r4 = 0.0;
  for (const auto& r : res.records) {
    max_gap = std::max(max_gap, r.relative_gauss_gap());
    if (r.residual_eq1 == r.residual_eq1) max_r1 = std::max(max_r1, r.residual_eq1);
    if (r.residual_eq4 == r.residual_eq4) max_r4 = std::max(max_r4, r.residual_eq4);
  }

  const bool mono_ok = mono.max_violation <= mono_tol;
  const bool violated = !mono_ok || !bound.within_tolerance || !decay.sandwich_holds || !decay.M_bounded;
  int code = kExitOk;
  if (res.status == RunStatus::Failed) {
    code = kExitIntegration;
  } else if (violated) {
    code = kExitViolation;
  }

  const DiagnosticsRecord& fin = res.records.back();
  json report = {
      {"status", status_name(res.status)},
      {"exit_code", code},
      {"n", cfg.n},
      {"t_final", fin.t},
      {"steps", res.final_state.step()},
      {"records", res.records.size()},
      {"monotonicity",
       {{"M0", M0},
        {"max_violation", mono.max_violation},
        {"total_violation", mono.total_violation},
        {"tolerance", mono_tol},
        {"pass", mono_ok}}},
      {"eta_lower_bound",
       {{"min_eta0", res.records.front().min_eta},
        {"worst_margin", bound.worst_margin},
        {"worst_scaled", bound.worst_scaled},
        {"pass", bound.within_tolerance}}},
      {"gauss", {{"max_relative_gap", max_gap}, {"final_relative_gap", fin.relative_gauss_gap()}}},
      {"decay",
       {{"I_H2_ratio", decay.decay_ratio},
        {"max_sandwich_excess", decay.max_sandwich_excess},
        {"max_M_growth", decay.max_growth},
        {"sandwich_holds", decay.sandwich_holds},
        {"M_bounded", decay.M_bounded},
        {"decayed", decay.decayed}}},
      {"residuals", {{"max_eq1", max_r1}, {"max_eq4", max_r4}}},
  };
  if (res.status == RunStatus::Failed) report["failure"] = res.failure;
  write_json(cfg.out_dir / "report.json", report);

  log << status_name(res.status) << " at t = " << fin.t << " after " << res.final_state.step() << " steps\n";
  if (res.status == RunStatus::Failed) log << "integration failure: " << res.failure << '\n';
  if (!mono_ok) log << "monotonicity violation " << mono.max_violation << " exceeds " << mono_tol << '\n';
  if (!bound.within_tolerance) log << "eta fell below its lower bound (margin " << bound.worst_margin << ")\n";
  if (!decay.sandwich_holds) log << "int |H|^2 exceeded M by " << decay.max_sandwich_excess << '\n';
  if (!decay.M_bounded) log << "M grew by " << decay.max_growth << '\n';
  return code;
}

std::optional<RunConfig> load_flow_config(const std::filesystem::path& path, std::ostream& log) {
  try {
    RunConfig cfg = load_config(path);
    require_flow_config(cfg);
    return cfg;
  } catch (const ConfigError& e) {
    log << path.string() << ": " << e.what() << '\n';
    return std::nullopt;
  }
}

std::optional<Snapshot> load_snapshot(const std::filesystem::path& path, int n, std::ostream& log) {
  try {
    Snapshot snap = read_snapshot(path);
    if (snap.map.n() != n) {
      log << path.string() << ": snapshot grid is " << snap.map.n() << ", config asks for n = " << n << '\n';
      return std::nullopt;
    }
    return snap;
  } catch (const SnapshotError& e) {
    log << path.string() << ": " << e.what() << '\n';
    return std::nullopt;
  }
}

}  // namespace

int cmd_run(const std::filesystem::path& config, std::ostream& log) {
  const auto cfg = load_flow_config(config, log);
  if (!cfg) return kExitBadInput;
  std::optional<Snapshot> start;
  if (cfg->initial.snapshot) {
    std::filesystem::path p = *cfg->initial.snapshot;
    if (p.is_relative()) p = config.parent_path() / p;
    start = load_snapshot(p, cfg->n, log);
    if (!start) return kExitBadInput;
  }
  return execute(*cfg, start, log);
}

int cmd_resume(const std::filesystem::path& snapshot, const std::filesystem::path& config, std::ostream& log) {
  const auto cfg = load_flow_config(config, log);
  if (!cfg) return kExitBadInput;
  const auto start = load_snapshot(snapshot, cfg->n, log);
  if (!start) return kExitBadInput;
  return execute(*cfg, start, log);
}

int cmd_verify(const std::filesystem::path& config, std::ostream& log, const VerifyOptions& overrides) {
  RunConfig cfg;
  try {
    cfg = load_config(config);
  } catch (const ConfigError& e) {
    log << config.string() << ": " << e.what() << '\n';
    return kExitBadInput;
  }
  VerifyOptions opt = overrides;
  opt.seed = cfg.seed;
  const VerifyReport rep = run_verification(opt);

  std::filesystem::create_directories(cfg.out_dir);
  write_json(cfg.out_dir / "verify.json", rep.to_json());
  for (const auto& s : rep.suites) {
    log << (s.passed ? "ok   " : "FAIL ") << s.name << " (" << s.samples << " samples, worst " << s.worst << ")\n";
    if (!s.passed) log << "     " << s.failure << " [seed " << cfg.seed << "]\n";
  }
  return rep.passed() ? kExitOk : kExitViolation;
}

}  // namespace lagflow
