#pragma once

namespace cstop {

// Serial kernels are kept as the reference implementation for tests and benchmarks.
enum class Exec { serial, parallel };

// Applies COLLECTIVE_STOPPING_THREADS (if set) as the OpenMP thread cap.
// Returns the resulting maximum thread count.
int configure_threads_from_env();
int max_threads();

}  // namespace cstop
