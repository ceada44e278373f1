// Acceptance run: one PASS/FAIL line per criterion. Exit status is nonzero
// if any criterion fails.

#include <chrono>
#include <cstdarg>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "lagflow/cli.hpp"
#include "lagflow/diagnostics.hpp"
#include "lagflow/geometry.hpp"
#include "lagflow/run.hpp"
#include "lagflow/verify.hpp"

using namespace lagflow;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(const char* f, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char* f, ...) {
  char buf[512];
  va_list args;
  va_start(args, f);
  std::vsnprintf(buf, sizeof buf, f, args);
  va_end(args);
  return buf;
}

Shear shear(ShearAxis axis, double a, std::vector<TrigTerm> terms) { return Shear{axis, a, Profile{std::move(terms)}}; }

// y-shear 0.1 sin 2 pi x, then x-shear 0.1 sin 2 pi y
ShearSpec standard_data() {
  return {{shear(ShearAxis::Y, 0.1, {{1, 0.0, 1.0}}), shear(ShearAxis::X, 0.1, {{1, 0.0, 1.0}})}};
}

// no reflection symmetry in either variable
ShearSpec asymmetric_data() {
  return {{shear(ShearAxis::Y, 0.1, {{1, 0.0, 1.0}, {2, 0.5, 0.0}}), shear(ShearAxis::X, 0.08, {{1, 0.0, 1.0}})}};
}

const char* kStandardInitial =
    R"({"shears": [{"axis": "y", "amplitude": 0.1, "profile": [{"k": 1, "sin": 1}]},
                   {"axis": "x", "amplitude": 0.1, "profile": [{"k": 1, "sin": 1}]}]})";

fs::path work_dir() {
  const fs::path dir = fs::temp_directory_path() / "lagflow_acceptance";
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

fs::path write_config(const fs::path& path, const fs::path& out, int n, double t_end, int diag_every,
                      int residual_every = 0) {
  std::ofstream(path) << "{\n  \"n\": " << n << ",\n  \"sigma\": 0.2,\n  \"t_end\": " << t_end
                      << ",\n  \"c\": 0,\n  \"initial\": " << kStandardInitial << ",\n  \"out_dir\": \""
                      << out.string() << "\",\n  \"diag_every\": " << diag_every
                      << ",\n  \"snapshot_every\": 0,\n  \"residual_every\": " << residual_every
                      << ",\n  \"seed\": 0\n}\n";
  return path;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string last_line(const std::string& text) {
  std::string t = text;
  while (!t.empty() && t.back() == '\n') t.pop_back();
  return t.substr(t.rfind('\n') + 1);
}

const SuiteResult* find_suite(const VerifyReport& rep, const std::string& name) {
  for (const auto& s : rep.suites)
    if (s.name == name) return &s;
  return nullptr;
}

// Standard flow run to t_end = 5. Records every 10 steps at n = 64 and at the
// same physical interval on finer grids, since dt scales with h^2.
struct StandardRun {
  int n = 0;
  RunResult result;
  double seconds = 0.0;
};

StandardRun standard_run(int n) {
  RunOptions opt;
  opt.t_end = 5.0;
  opt.diag_every = 10 * (n / 64) * (n / 64);
  if (opt.diag_every < 1) opt.diag_every = 1;
  const auto start = Clock::now();
  StandardRun r{n, run(FlowState(make_shear_composition(standard_data(), n)), opt), 0.0};
  r.seconds = seconds_since(start);
  return r;
}

double order(double coarse, double fine) { return std::log2(coarse / fine); }

// Residual triples (prev, mid, next) at uniform dt, sampled at t = 0 and
// after the first 0.01 of flow time.
struct ResidualStudy {
  std::vector<double> eq1, eq4, eq1_off, eq4_off;
};

ResidualStudy residual_study(const ShearSpec& spec, double t_sample) {
  ResidualStudy s;
  for (int n : {32, 64, 128}) {
    FlowState s0(make_shear_composition(spec, n));
    while (s0.t() < t_sample) s0 = step_rk4(s0, StepControl{});
    const FlowState s1 = step_rk4(s0, StepControl{});
    const FlowState s2 = step_rk4_fixed(s1, s1.dt_last());
    s.eq1.push_back(residual_eq1(s0, s1, s2));
    s.eq4.push_back(residual_eq4(s0, s1, s2));
    s.eq1_off.push_back(residual_eq1(s0, s1, s2, AmbientCurvature::Flat, GaugeCorrection::Off));
    s.eq4_off.push_back(residual_eq4(s0, s1, s2, AmbientCurvature::Flat, GaugeCorrection::Off));
  }
  return s;
}

double min_order(const std::vector<double>& r) {
  double m = 1e300;
  for (std::size_t k = 0; k + 1 < r.size(); ++k) m = std::min(m, order(r[k], r[k + 1]));
  return m;
}

// Order on the finest pair; a stalled residual has it near zero.
double finest_order(const std::vector<double>& r) { return order(r[r.size() - 2], r.back()); }

double max_relative_gauss_gap(const std::vector<DiagnosticsRecord>& records) {
  double m = 0.0;
  for (const auto& r : records) m = std::max(m, r.relative_gauss_gap());
  return m;
}

}  // namespace

int main() {
  const fs::path dir = work_dir();
  std::vector<std::pair<std::string, std::function<Outcome()>>> criteria;

  VerifyReport verify;
  double verify_seconds = 0.0;
  auto ensure_verify = [&] {
    if (!verify.suites.empty()) return;
    const auto start = Clock::now();
    verify = run_verification(VerifyOptions{});
    verify_seconds = seconds_since(start);
  };

  criteria.emplace_back("algebraic inequality suite", [&] {
    ensure_verify();
    const SuiteResult* h = find_suite(verify, "h_inequality");
    const SuiteResult* cs = find_suite(verify, "cauchy_schwarz");
    const SuiteResult* eq = find_suite(verify, "equality_cases");
    VerifyOptions flipped;
    flipped.inequality_samples = 10'000;
    flipped.flip_cauchy_schwarz = true;
    const SuiteResult* neg = find_suite(run_verification(flipped), "cauchy_schwarz");
    const bool pass = h->passed && cs->passed && eq->passed && h->samples >= 1'000'000 &&
                      cs->samples >= 1'000'000 && !neg->passed && verify_seconds <= 60.0;
    return Outcome{pass, fmt("%zu samples; min slack h %.2e, CS %.2e; equality worst %.1e; "
                             "flipped CS detected: %s; %.1f s",
                             h->samples, h->worst, cs->worst, eq->worst, neg->passed ? "no" : "yes",
                             verify_seconds)};
  });

  criteria.emplace_back("square-completion identity", [&] {
    ensure_verify();
    const SuiteResult* s = find_suite(verify, "square_completion");
    return Outcome{s->passed && s->samples >= 100'000,
                   fmt("%zu samples, worst relative gap %.2e (tol 1e-12)", s->samples, s->worst)};
  });

  criteria.emplace_back("Lagrangian / graph structure", [&] {
    double drift = 0.0, eta_max = 0.0, eta_min = 1.0;
    for (const auto& spec : {standard_data(), asymmetric_data(), ShearSpec{{shear(ShearAxis::Y, 0.2, {{1, 0.0, 1.0}})}}}) {
      for (int n : {32, 64, 128}) {
        const JacobianField jac = analytic_jacobian(spec, n);
        drift = std::max(drift, det_drift(jac));
        for (const Mat2& df : jac) {
          const double e = eta(induced_metric(df));
          eta_max = std::max(eta_max, e);
          eta_min = std::min(eta_min, e);
        }
      }
    }
    ensure_verify();
    const SuiteResult* random = find_suite(verify, "analytic_det");
    const double eta_id = GeometryCache(TorusMap::identity(64)).min_eta();
    const double eta_cat = GeometryCache(TorusMap::linear_map(64, IntMatrix2{2, 1, 1, 1})).min_eta();
    const bool pass = drift <= 1e-13 && random->passed && eta_min > 0.0 && eta_max <= 1.0 &&
                      std::abs(eta_id - 1.0) <= 1e-14 && std::abs(eta_cat - 2.0 / 3.0) <= 1e-14;
    return Outcome{pass, fmt("analytic det drift %.1e (random compositions %.1e); eta in [%.4f, %.17g]; "
                             "eta(id) - 1 = %.1e; eta(cat) - 2/3 = %.1e",
                             drift, random->worst, eta_min, eta_max, eta_id - 1.0, eta_cat - 2.0 / 3.0)};
  });

  ResidualStudy at0, later, control;
  double residual_seconds = 0.0;
  auto ensure_residuals = [&] {
    if (!at0.eq1.empty()) return;
    const auto start = Clock::now();
    at0 = residual_study(standard_data(), 0.0);
    later = residual_study(standard_data(), 0.01);
    control = residual_study(asymmetric_data(), 0.0);
    residual_seconds = seconds_since(start);
  };

  criteria.emplace_back("evolution residual refinement", [&] {
    ensure_residuals();
    const double o = std::min(min_order(at0.eq1), min_order(later.eq1));
    const double o_with = min_order(control.eq1);
    const double o_off = finest_order(control.eq1_off);
    const bool pass = o >= 2.0 && o_with >= 2.0 && o_off < 0.5 && residual_seconds <= 600.0;
    return Outcome{pass, fmt("sup|r| n=32/64/128: %.2e %.2e %.2e, min order %.2f (t=0.01: %.2f); asymmetric data "
                             "order %.2f with T; without T %.2e %.2e %.2e, finest-pair order %.2f; %.1f s",
                             at0.eq1[0], at0.eq1[1], at0.eq1[2], min_order(at0.eq1), min_order(later.eq1), o_with,
                             control.eq1_off[0], control.eq1_off[1], control.eq1_off[2], o_off, residual_seconds)};
  });

  criteria.emplace_back("eta-equation residual refinement", [&] {
    ensure_residuals();
    const double o = std::min(min_order(at0.eq4), min_order(later.eq4));
    const double o_with = min_order(control.eq4);
    const double o_off = finest_order(control.eq4_off);
    const bool pass = o >= 1.5 && o_with >= 1.5 && o_off < 0.5 && residual_seconds <= 600.0;
    return Outcome{pass, fmt("sup|r| n=32/64/128: %.2e %.2e %.2e, min order %.2f (t=0.01: %.2f); asymmetric data "
                             "order %.2f with T; without T %.2e %.2e %.2e, finest-pair order %.2f",
                             at0.eq4[0], at0.eq4[1], at0.eq4[2], min_order(at0.eq4), min_order(later.eq4), o_with,
                             control.eq4_off[0], control.eq4_off[1], control.eq4_off[2], o_off)};
  });

  std::optional<StandardRun> run64, run128;
  auto ensure_runs = [&] {
    if (run64) return;
    run64 = standard_run(64);
    run128 = standard_run(128);
  };

  criteria.emplace_back("monotonicity of M at c = 0", [&] {
    ensure_runs();
    const auto m64 = check_monotonicity(run64->result.records, AmbientCurvature::Flat);
    const auto m128 = check_monotonicity(run128->result.records, AmbientCurvature::Flat);
    const double M0 = run64->result.records.front().M;

    // the CLI path on the standard config must agree and exit 0
    std::ostringstream log;
    const fs::path cfg = write_config(dir / "standard.json", dir / "standard", 64, 5.0, 10, 50);
    const int code = cmd_run(cfg, log);
    const auto report = nlohmann::json::parse(slurp(dir / "standard" / "report.json"));
    const double reported = report["monotonicity"]["max_violation"].get<double>();

    const bool pass = m64.max_violation <= 1e-4 * M0 && m128.max_violation <= m64.max_violation / 3.0 &&
                      code == kExitOk && reported <= 1e-4 * M0;
    return Outcome{pass, fmt("max violation n=64 %.3e, n=128 %.3e (M0 %.4f, tol %.2e, refinement check v128 <= v64/3); %zu and %zu intervals; "
                             "cmd_run exit %d, report %.3e",
                             m64.max_violation, m128.max_violation, M0, 1e-4 * M0, m64.violations.size(),
                             m128.violations.size(), code, reported)};
  });

  criteria.emplace_back("eta lower bound", [&] {
    ensure_runs();
    const auto b = check_eta_lower_bound(run64->result.records, AmbientCurvature::Flat);
    const double m = 1.0 / std::sqrt(2.0);
    const double hyp = eta_lower_bound(m, AmbientCurvature::Hyperbolic, std::log(2.0));
    const double sph = eta_lower_bound(m, AmbientCurvature::Spherical, 60.0);
    const double flat = eta_lower_bound(m, AmbientCurvature::Flat, 5.0);
    const bool hand = std::abs(hyp - 1.0 / std::sqrt(5.0)) <= 1e-14 && std::abs(sph - 1.0) <= 1e-14 && flat == m;
    return Outcome{b.within_tolerance && hand,
                   fmt("c=0 worst margin %.3e (min eta %.6f -> %.6f); bound(ln 2, c=-1) - 1/sqrt5 = %.1e; "
                       "bound(60, c=1) - 1 = %.1e",
                       b.worst_margin, run64->result.records.front().min_eta, run64->result.records.back().min_eta,
                       hyp - 1.0 / std::sqrt(5.0), sph - 1.0)};
  });

  criteria.emplace_back("convergence mechanism at c = 0", [&] {
    ensure_runs();
    const auto& recs = run64->result.records;
    const auto d = check_H2_decay(recs, AmbientCurvature::Flat);
    const DiagnosticsRecord& fin = recs.back();
    const TorusMap& m = run64->result.final_state.map();
    double spread = 0.0;
    for (const GridField* u : {&m.u1(), &m.u2()}) {
      double mean = 0.0;
      for (double v : *u) mean += v;
      mean /= static_cast<double>(u->size());
      for (double v : *u) spread = std::max(spread, std::abs(v - mean));
    }
    const bool pass = d.sandwich_holds && d.decay_ratio <= 0.01 && fin.sup_H < 1e-3 && spread <= 1e-3 &&
                      run64->result.status != RunStatus::Failed && run64->seconds <= 180.0;
    return Outcome{pass, fmt("stopped (%s) at t = %.4f; max(I_H2 - M) %.1e; I_H2 ratio %.2e; sup|H| %.2e; "
                             "|u - mean u| %.2e; %.1f s",
                             run64->result.status == RunStatus::Converged ? "converged" : "t_end", fin.t,
                             d.max_sandwich_excess, d.decay_ratio, fin.sup_H, spread, run64->seconds)};
  });

  criteria.emplace_back("Gauss formula", [&] {
    ensure_runs();
    const double g64 = max_relative_gauss_gap(run64->result.records);
    const double g128 = max_relative_gauss_gap(run128->result.records);
    return Outcome{g64 <= 0.01 && g64 / g128 >= 3.0,
                   fmt("max |I_A2 - I_H2| / I_A2 n=64 %.3e, n=128 %.3e, ratio %.1f (n=128 run %.1f s)", g64, g128,
                       g64 / g128, run128->seconds)};
  });

  criteria.emplace_back("determinism and persistence", [&] {
    std::ostringstream log;
    const fs::path a = write_config(dir / "a.json", dir / "a", 64, 5.0, 10, 50);
    const fs::path b = write_config(dir / "b.json", dir / "b", 64, 5.0, 10, 50);
    const int ca = cmd_run(a, log), cb = cmd_run(b, log);
    const bool same_csv = slurp(dir / "a" / "diagnostics.csv") == slurp(dir / "b" / "diagnostics.csv");

    bool split_ok = true;
    std::string splits;
    for (double t_split : {0.3, 2.5}) {
      const std::string tag = fmt("split%.1f", t_split);
      const fs::path first = write_config(dir / (tag + "_1.json"), dir / (tag + "_1"), 64, t_split, 10, 50);
      const fs::path second = write_config(dir / (tag + "_2.json"), dir / (tag + "_2"), 64, 5.0, 10, 50);
      const int c1 = cmd_run(first, log);
      const int c2 = cmd_resume(dir / (tag + "_1") / "final.bin", second, log);
      const bool row = last_line(slurp(dir / "a" / "diagnostics.csv")) ==
                       last_line(slurp(dir / (tag + "_2") / "diagnostics.csv"));
      const bool snap = slurp(dir / "a" / "final.bin") == slurp(dir / (tag + "_2") / "final.bin");
      split_ok = split_ok && c1 == kExitOk && c2 == kExitOk && row && snap;
      splits += fmt("; split at %.1f: final row %s, final snapshot %s", t_split, row ? "equal" : "DIFFERS",
                    snap ? "equal" : "DIFFERS");
    }
    return Outcome{ca == kExitOk && cb == kExitOk && same_csv && split_ok,
                   fmt("repeat run CSV %s", same_csv ? "bitwise equal" : "DIFFERS") + splits};
  });

  int failures = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    Outcome o;
    try {
      o = criteria[k].second();
    } catch (const std::exception& e) {
      o = Outcome{false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::cout << "criterion " << (k + 1) << " [" << (o.pass ? "PASS" : "FAIL") << "] " << criteria[k].first << ": "
              << o.detail << std::endl;
  }
  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << std::endl;
  return failures == 0 ? 0 : 1;
}
