#pragma once

#include <cstddef>
#include <functional>

namespace voxplane {

// Data-parallel execution over index ranges on a process-wide thread pool.
//
// The pool mirrors the structure of per-point / per-voxel / per-iteration
// GPU kernels: one parallel region per kernel launch, a barrier at the end.
// Work items are handed out as contiguous chunks through an atomic cursor,
// so scheduling is dynamic but every item is computed exactly once from its
// index alone. Callers must keep results independent of chunk assignment
// (write to per-index slots, reduce with integers or total-order min/max);
// under that contract output is bitwise identical for any thread count.

// Set the pool size. 0 = hardware concurrency. Takes effect immediately;
// not thread-safe against concurrent parallel_for calls.
void set_thread_count(unsigned n);
unsigned thread_count();

// Reads VOXPLANE_THREADS if set, else hardware concurrency.
unsigned default_thread_count();

// Invoke fn(begin, end) over disjoint chunks covering [0, n).
void parallel_for_chunks(std::size_t n, std::size_t grain,
                         const std::function<void(std::size_t, std::size_t)>& fn);

// Invoke fn(i) for every i in [0, n).
template <typename F>
void parallel_for(std::size_t n, F&& fn, std::size_t grain = 0) {
  if (grain == 0) grain = n / (8 * (thread_count() ? thread_count() : 1)) + 1;
  parallel_for_chunks(n, grain, [&fn](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) fn(i);
  });
}

}  // namespace voxplane
