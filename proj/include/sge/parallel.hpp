#pragma once

#include <cstddef>
#include <functional>

namespace sge {

/// Upper bound on worker threads used by library calls. Defaults to 1.
void set_thread_count(unsigned n);
unsigned thread_count();

/// Runs body(k) for k in [0, count). Each index is visited exactly once; the
/// caller writes results into per-index slots, so output never depends on the
/// schedule. Calls made from inside a running parallel_for execute serially.
/// The first exception thrown by any body is rethrown after all workers stop.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace sge
