#include "lagflow/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace lagflow {

namespace {

std::atomic<int> g_override{0};

int default_workers() {
  int hw = static_cast<int>(std::thread::hardware_concurrency());
  if (hw <= 0) hw = 1;
  if (const char* env = std::getenv("LAGFLOW_THREADS")) {
    try {
      const int cap = std::stoi(env);
      if (cap > 0) hw = std::min(hw, cap);
    } catch (const std::exception&) {
      // ignore malformed values
    }
  }
  return hw;
}

}  // namespace

int worker_count() {
  const int forced = g_override.load();
  if (forced > 0) return forced;
  static const int workers = default_workers();
  return workers;
}

void set_worker_count(int count) { g_override.store(std::max(count, 0)); }

void parallel_for(int count, const std::function<void(int, int)>& body) {
  const int workers = std::min(worker_count(), count);
  if (workers <= 1) {
    body(0, count);
    return;
  }
  std::vector<std::jthread> threads;
  threads.reserve(workers - 1);
  const int chunk = (count + workers - 1) / workers;
  for (int w = 1; w < workers; ++w) {
    const int b = w * chunk;
    const int e = std::min(count, b + chunk);
    if (b < e) threads.emplace_back([&body, b, e] { body(b, e); });
  }
  body(0, std::min(count, chunk));
}

}  // namespace lagflow
