#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "lagflow/torusmap.hpp"

namespace lagflow {

/// Configuration error with the 1-based line it refers to (0 if unknown).
class ConfigError : public std::runtime_error {
 public:
  ConfigError(int line, const std::string& message)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + message : message), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

/// Initial data: a shear composition (with an optional linear part) or a
/// snapshot file.
struct InitialData {
  ShearSpec shears;
  IntMatrix2 linear;
  std::optional<std::filesystem::path> snapshot;
};

/// JSON document with exactly these keys:
///   n, sigma, t_end, c, initial, out_dir, diag_every, snapshot_every,
///   residual_every, seed
/// `initial` is {"shears": [...], "linear": [[a, b], [c, d]]} (linear
/// optional) or {"snapshot": "path"}. Each shear is
///   {"axis": "x" | "y", "amplitude": a, "profile": [{"k": 1, "cos": 0, "sin": 1}, ...]}.
struct RunConfig {
  int n = 64;
  double sigma = 0.2;
  double t_end = 0.0;
  int c = 0;
  InitialData initial;
  std::filesystem::path out_dir = ".";
  int diag_every = 1;
  int snapshot_every = 0;
  int residual_every = 0;
  std::uint64_t seed = 0;
};

/// Parses and validates the field ranges; throws ConfigError.
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::filesystem::path& path);

/// Additional check for flow runs: c must be 0.
void require_flow_config(const RunConfig& cfg);

/// Builds the initial map from the shear spec (ignores `snapshot`).
TorusMap initial_map(const RunConfig& cfg);

}  // namespace lagflow
