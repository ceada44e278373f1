#pragma once

#include <functional>

namespace lagflow {

/// Worker count: hardware concurrency, capped by LAGFLOW_THREADS when set.
int worker_count();

/// Overrides the worker count for this process (0 restores the default).
void set_worker_count(int count);

/// Splits [0, count) into contiguous chunks and runs body(begin, end) on each.
/// Bodies must write disjoint outputs.
void parallel_for(int count, const std::function<void(int, int)>& body);

}  // namespace lagflow
