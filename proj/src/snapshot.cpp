#include "lagflow/snapshot.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

namespace lagflow {

static_assert(std::endian::native == std::endian::little, "snapshot I/O assumes a little-endian host");

namespace {

template <class T>
void put(std::ostream& out, T value) {
  char buf[sizeof(T)];
  std::memcpy(buf, &value, sizeof(T));
  out.write(buf, sizeof(T));
}

template <class T>
T get(std::istream& in) {
  char buf[sizeof(T)];
  if (!in.read(buf, sizeof(T))) throw SnapshotError("snapshot truncated");
  T value;
  std::memcpy(&value, buf, sizeof(T));
  return value;
}

}  // namespace

void write_snapshot(std::ostream& out, const Snapshot& snap) {
  const TorusMap& m = snap.map;
  out.write(kSnapshotMagic, sizeof(kSnapshotMagic));
  put<std::int32_t>(out, m.n());
  put<std::int32_t>(out, m.linear().a11);
  put<std::int32_t>(out, m.linear().a12);
  put<std::int32_t>(out, m.linear().a21);
  put<std::int32_t>(out, m.linear().a22);
  put<double>(out, snap.t);
  put<double>(out, snap.dt_last);
  put<std::int64_t>(out, snap.step);
  put<std::int32_t>(out, snap.converged_records);
  for (std::size_t k = 0; k < m.u1().size(); ++k) {
    put<double>(out, m.u1()[k]);
    put<double>(out, m.u2()[k]);
  }
  if (!out) throw SnapshotError("failed writing snapshot");
}

void write_snapshot(const std::filesystem::path& path, const Snapshot& snap) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw SnapshotError("cannot open " + path.string() + " for writing");
  write_snapshot(out, snap);
}

Snapshot read_snapshot(std::istream& in) {
  char magic[sizeof(kSnapshotMagic)];
  if (!in.read(magic, sizeof(magic)) || std::memcmp(magic, kSnapshotMagic, sizeof(magic)) != 0) {
    throw SnapshotError("bad snapshot magic header (expected LAGFLOW1)");
  }
  const int n = get<std::int32_t>(in);
  if (n < 8 || n % 2 != 0 || n > (1 << 14)) throw SnapshotError("snapshot has invalid grid size");
  IntMatrix2 lin;
  lin.a11 = get<std::int32_t>(in);
  lin.a12 = get<std::int32_t>(in);
  lin.a21 = get<std::int32_t>(in);
  lin.a22 = get<std::int32_t>(in);
  const double t = get<double>(in);
  const double dt_last = get<double>(in);
  const auto step = get<std::int64_t>(in);
  const auto converged = get<std::int32_t>(in);
  GridField u1(n), u2(n);
  for (std::size_t k = 0; k < u1.size(); ++k) {
    u1[k] = get<double>(in);
    u2[k] = get<double>(in);
  }
  try {
    return Snapshot{TorusMap(lin, std::move(u1), std::move(u2)), t, dt_last, step, converged};
  } catch (const std::invalid_argument& e) {
    throw SnapshotError(std::string("snapshot holds an invalid map: ") + e.what());
  }
}

Snapshot read_snapshot(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SnapshotError("cannot open snapshot " + path.string());
  return read_snapshot(in);
}

}  // namespace lagflow
