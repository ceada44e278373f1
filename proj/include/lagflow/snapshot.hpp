#pragma once

// Binary TorusMap snapshots.
//
// Layout (little-endian):
//   8 bytes   magic "LAGFLOW1"
//   int32     n
//   int32 x 4 linear part a11 a12 a21 a22
//   float64   flow time t
//   float64   last time step
//   int64     step index
//   int32     consecutive converged diagnostic records
//   float64 x 2 n^2   displacement pairs (u1, u2), node (i, j) at i * n + j
//
// Doubles are stored bit-for-bit, so a write/read cycle is exact.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <stdexcept>

#include "lagflow/torusmap.hpp"

namespace lagflow {

inline constexpr char kSnapshotMagic[8] = {'L', 'A', 'G', 'F', 'L', 'O', 'W', '1'};

class SnapshotError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Snapshot {
  TorusMap map;
  double t = 0.0;
  double dt_last = 0.0;
  std::int64_t step = 0;
  std::int32_t converged_records = 0;
};

void write_snapshot(std::ostream& out, const Snapshot& snap);
void write_snapshot(const std::filesystem::path& path, const Snapshot& snap);

/// Throws SnapshotError on a bad magic header, truncated data or invalid map.
Snapshot read_snapshot(std::istream& in);
Snapshot read_snapshot(const std::filesystem::path& path);

}  // namespace lagflow
