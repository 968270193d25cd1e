// parallel.hpp — Execution policy for the OpenMP-parallel kernels

#pragma once

#ifdef _OPENMP
#include <omp.h>
#endif

namespace crowsim {

// Every data-parallel kernel has a serial reference path used for testing and
// benchmarking; Parallel enables the OpenMP variant. Results are deterministic
// for a fixed thread count (partial sums are combined in thread order).
enum class Exec { Serial, Parallel };

inline int max_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

inline int thread_count(Exec exec) {
    return exec == Exec::Parallel ? max_threads() : 1;
}

}  // namespace crowsim
