#pragma once

#include <cstdint>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace cryodiff {

// Global worker count. 1 = serial. Results are identical for any value
// because every parallel loop writes disjoint outputs with a fixed
// per-element accumulation order.
int num_threads();
void set_num_threads(int n);

template <typename Fn>
void parallel_for(std::int64_t n, Fn&& fn) {
#ifdef _OPENMP
    if (num_threads() > 1 && n > 1) {
#pragma omp parallel for schedule(static) num_threads(num_threads())
        for (std::int64_t i = 0; i < n; ++i) fn(i);
        return;
    }
#endif
    for (std::int64_t i = 0; i < n; ++i) fn(i);
}

}  // namespace cryodiff
