#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "doctest.h"
#include "lagflow/cli.hpp"
#include "lagflow/config.hpp"
#include "lagflow/snapshot.hpp"

using namespace lagflow;
namespace fs = std::filesystem;

namespace {

const char* kShear = R"({"shears": [{"axis": "y", "amplitude": 0.1, "profile": [{"k": 1, "sin": 1}]}]})";

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("lagflow_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string config_text(const fs::path& out, double t_end, const std::string& initial = kShear, int n = 16,
                        int c = 0, int snapshot_every = 0) {
  std::ostringstream s;
  s << "{\n"
    << "  \"n\": " << n << ",\n"
    << "  \"sigma\": 0.2,\n"
    << "  \"t_end\": " << t_end << ",\n"
    << "  \"c\": " << c << ",\n"
    << "  \"initial\": " << initial << ",\n"
    << "  \"out_dir\": \"" << out.string() << "\",\n"
    << "  \"diag_every\": 5,\n"
    << "  \"snapshot_every\": " << snapshot_every << ",\n"
    << "  \"residual_every\": 2,\n"
    << "  \"seed\": 0\n"
    << "}\n";
  return s.str();
}

fs::path write_file(const fs::path& path, const std::string& text) {
  std::ofstream(path) << text;
  return path;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::vector<std::string> lines(const fs::path& path) {
  std::istringstream in(slurp(path));
  std::vector<std::string> out;
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

int line_of_error(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.line();
  }
  return -1;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("config parsing") {
  const fs::path dir = scratch("parse");
  const std::string good = config_text(dir, 0.5);
  const RunConfig cfg = parse_config(good);
  CHECK(cfg.n == 16);
  CHECK(cfg.t_end == 0.5);
  CHECK(cfg.diag_every == 5);
  CHECK(cfg.residual_every == 2);
  REQUIRE(cfg.initial.shears.shears.size() == 1);
  CHECK(cfg.initial.shears.shears[0].amplitude == 0.1);
  CHECK(cfg.initial.shears.shears[0].axis == ShearAxis::Y);

  SUBCASE("unknown key is rejected on its line") {
    std::string bad = good;
    bad.insert(bad.find("  \"seed\""), "  \"sigmaa\": 0.3,\n");
    CHECK(line_of_error(bad) == 11);
  }
  SUBCASE("out-of-range values name their line") {
    std::string bad = good;
    bad.replace(bad.find("\"sigma\": 0.2"), 12, "\"sigma\": 0.7");
    CHECK(line_of_error(bad) == 3);
    std::string odd = good;
    odd.replace(odd.find("\"n\": 16"), 7, "\"n\": 15");
    CHECK(line_of_error(odd) == 2);
  }
  SUBCASE("missing key") {
    std::string bad = good;
    bad.erase(bad.find("  \"seed\""));
    bad.erase(bad.rfind(','));
    bad += "\n}\n";
    CHECK_THROWS_AS(parse_config(bad), ConfigError);
  }
  SUBCASE("malformed JSON reports the line of the syntax error") {
    std::string bad = good;
    bad.replace(bad.find("\"t_end\": 0.5,"), 13, "\"t_end\": 0.5");
    CHECK(line_of_error(bad) == 5);
  }
  SUBCASE("linear part must be unimodular") {
    const std::string lin = config_text(dir, 0, R"({"shears": [], "linear": [[2, 0], [0, 1]]})");
    CHECK(line_of_error(lin) == 6);
  }
  SUBCASE("flows need c = 0") {
    const RunConfig curved = parse_config(config_text(dir, 1, kShear, 16, -1));
    CHECK_THROWS_AS(require_flow_config(curved), ConfigError);
  }
}

TEST_CASE("run with t_end = 0 writes one record") {
  const fs::path dir = scratch("t0");
  std::ostringstream log;
  const fs::path cfg = write_file(dir / "cfg.json", config_text(dir / "out", 0.0));
  CHECK(cmd_run(cfg, log) == kExitOk);
  const auto rows = lines(dir / "out" / "diagnostics.csv");
  CHECK(rows.size() == 2);
  CHECK(fs::exists(dir / "out" / "report.json"));
  CHECK(fs::exists(dir / "out" / "final.bin"));
}

TEST_CASE("identity run has zero curvature columns") {
  const fs::path dir = scratch("identity");
  std::ostringstream log;
  const fs::path cfg = write_file(dir / "cfg.json", config_text(dir / "out", 1.0, R"({"shears": []})"));
  CHECK(cmd_run(cfg, log) == kExitOk);
  const auto rows = lines(dir / "out" / "diagnostics.csv");
  REQUIRE(rows.size() >= 2);
  for (std::size_t r = 1; r < rows.size(); ++r) {
    std::istringstream in(rows[r]);
    std::vector<std::string> cols;
    for (std::string c; std::getline(in, c, ',');) cols.push_back(c);
    REQUIRE(cols.size() == 13);
    for (int c : {2, 3, 4, 5, 6, 7}) CHECK(std::stod(cols[c]) == 0.0);
  }
}

TEST_CASE("bad inputs exit with 1") {
  const fs::path dir = scratch("bad");
  std::ostringstream log;
  CHECK(cmd_run(dir / "missing.json", log) == kExitBadInput);
  const fs::path curved = write_file(dir / "curved.json", config_text(dir / "out", 1.0, kShear, 16, 1));
  CHECK(cmd_run(curved, log) == kExitBadInput);
  const fs::path broken = write_file(dir / "broken.json", "{\n  \"n\": 16,\n  oops\n}\n");
  log.str("");
  CHECK(cmd_run(broken, log) == kExitBadInput);
  CHECK(log.str().find("line 3") != std::string::npos);
}

TEST_CASE("resume: snapshot at t = 0 reproduces run, corrupt header is rejected") {
  const fs::path dir = scratch("resume");
  std::ostringstream log;
  const fs::path cfg_a = write_file(dir / "a.json", config_text(dir / "a", 0.02));
  REQUIRE(cmd_run(cfg_a, log) == kExitOk);

  const fs::path cfg_z = write_file(dir / "z.json", config_text(dir / "z", 0.0));
  REQUIRE(cmd_run(cfg_z, log) == kExitOk);
  const fs::path cfg_b = write_file(dir / "b.json", config_text(dir / "b", 0.02));
  CHECK(cmd_resume(dir / "z" / "final.bin", cfg_b, log) == kExitOk);
  CHECK(slurp(dir / "a" / "diagnostics.csv") == slurp(dir / "b" / "diagnostics.csv"));
  CHECK(slurp(dir / "a" / "final.bin") == slurp(dir / "b" / "final.bin"));

  std::string bytes = slurp(dir / "z" / "final.bin");
  bytes[0] = 'X';
  const fs::path corrupt = write_file(dir / "corrupt.bin", bytes);
  CHECK(cmd_resume(corrupt, cfg_b, log) == kExitBadInput);

  // grid mismatch between snapshot and config
  const fs::path cfg_32 = write_file(dir / "n32.json", config_text(dir / "c", 0.02, kShear, 32));
  CHECK(cmd_resume(dir / "z" / "final.bin", cfg_32, log) == kExitBadInput);
}

TEST_CASE("verify is deterministic and catches a flipped Cauchy-Schwarz term") {
  const fs::path dir = scratch("verify");
  std::ostringstream log;
  VerifyOptions small;
  small.inequality_samples = 20'000;
  small.identity_samples = 5'000;
  small.oracle_samples = 5'000;

  const fs::path a = write_file(dir / "a.json", config_text(dir / "a", 0.0));
  const fs::path b = write_file(dir / "b.json", config_text(dir / "b", 0.0));
  CHECK(cmd_verify(a, log, small) == kExitOk);
  CHECK(cmd_verify(b, log, small) == kExitOk);
  CHECK(slurp(dir / "a" / "verify.json") == slurp(dir / "b" / "verify.json"));

  VerifyOptions flipped = small;
  flipped.flip_cauchy_schwarz = true;
  log.str("");
  CHECK(cmd_verify(a, log, flipped) == kExitViolation);
  CHECK(log.str().find("FAIL cauchy_schwarz") != std::string::npos);
  CHECK(log.str().find("sample ") != std::string::npos);
}

TEST_CASE("executable exit codes") {
  const char* exe = std::getenv("LAGFLOW_CLI");
  if (exe == nullptr) {
    MESSAGE("LAGFLOW_CLI not set; skipping process-level checks");
    return;
  }
  const fs::path dir = scratch("exe");
  auto run = [&](const std::string& args) {
    const int status = std::system((std::string(exe) + " " + args + " 2>/dev/null").c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  };
  const fs::path cfg = write_file(dir / "cfg.json", config_text(dir / "out", 0.0));
  CHECK(run("run " + cfg.string()) == 0);
  CHECK(run("run " + (dir / "nope.json").string()) == 1);
  CHECK(run("resume " + (dir / "cfg.json").string() + " " + cfg.string()) == 1);
  CHECK(run("bogus") == 1);
  CHECK(run("verify --samples 1000 " + cfg.string()) == 0);
}

}  // TEST_SUITE
