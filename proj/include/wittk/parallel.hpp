#pragma once

#include <cstddef>
#include <cstdint>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace wittk {

// Execution policy for the data-parallel kernels. Every kernel keeps a serial
// path that produces bit-identical results; tests compare the two and the
// bench tool times them.
enum class Exec { Serial, Parallel };

inline int hardware_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

template <typename Fn>
void parallel_for(std::int64_t n, Exec exec, Fn&& fn) {
#ifdef _OPENMP
    if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(dynamic, 64)
        for (std::int64_t i = 0; i < n; ++i) fn(i);
        return;
    }
#else
    (void)exec;
#endif
    for (std::int64_t i = 0; i < n; ++i) fn(i);
}

}  // namespace wittk
