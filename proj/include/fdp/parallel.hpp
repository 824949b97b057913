#pragma once

#include <cstdint>
#include <vector>

#include "fdp/logspace.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace fdp::par {

// Worker count. 0 means "library default" (FDP_THREADS env or OpenMP default).
void set_threads(int k);
int threads();
bool openmp_enabled();

namespace detail {
inline constexpr std::int64_t kBlock = 2048;
}

// Deterministic blocked reduction of term(i) over [0, n).
//
// The range is cut into fixed 2048-wide blocks; each block is Neumaier-summed
// serially and the block results are combined by a pairwise tree. The block
// structure does not depend on the thread count, so the result is bit-identical
// for any number of threads and for the serial reference path.
template <class F>
double block_sum(std::int64_t n, F&& term, bool use_parallel = true) {
    if (n <= 0) return 0.0;
    const std::int64_t nb = (n + detail::kBlock - 1) / detail::kBlock;
    std::vector<double> partial(static_cast<std::size_t>(nb), 0.0);

#ifdef _OPENMP
    if (use_parallel && threads() != 1) {
#pragma omp parallel for schedule(static) num_threads(threads())
        for (std::int64_t b = 0; b < nb; ++b) {
            NeumaierSum acc;
            const std::int64_t lo = b * detail::kBlock;
            const std::int64_t hi = std::min(n, lo + detail::kBlock);
            for (std::int64_t i = lo; i < hi; ++i) acc.add(term(i));
            partial[static_cast<std::size_t>(b)] = acc.value();
        }
    } else
#endif
    {
        (void)use_parallel;
        for (std::int64_t b = 0; b < nb; ++b) {
            NeumaierSum acc;
            const std::int64_t lo = b * detail::kBlock;
            const std::int64_t hi = std::min(n, lo + detail::kBlock);
            for (std::int64_t i = lo; i < hi; ++i) acc.add(term(i));
            partial[static_cast<std::size_t>(b)] = acc.value();
        }
    }

    // pairwise tree over block results
    std::size_t len = partial.size();
    while (len > 1) {
        const std::size_t half = (len + 1) / 2;
        for (std::size_t i = 0; i + half < len; ++i) partial[i] += partial[i + half];
        len = half;
    }
    return partial[0];
}

// Parallel map over [0, n); body(i) must write only to its own slots.
template <class F>
void for_each(std::int64_t n, F&& body, bool use_parallel = true) {
#ifdef _OPENMP
    if (use_parallel && threads() != 1) {
#pragma omp parallel for schedule(static) num_threads(threads())
        for (std::int64_t i = 0; i < n; ++i) body(i);
        return;
    }
#endif
    (void)use_parallel;
    for (std::int64_t i = 0; i < n; ++i) body(i);
}

}  // namespace fdp::par
