#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace lsr {

#ifdef _OPENMP
inline int max_threads() { return omp_get_max_threads(); }
inline void set_threads(int n) {
    if (n > 0) omp_set_num_threads(n);
}
#else
inline int max_threads() { return 1; }
inline void set_threads(int) {}
#endif

// Sum of term(0..n-1) with a fixed blocking scheme, so the result is
// bit-identical for any thread count: blocks are summed serially in index
// order and the block partials are combined in block order.
template <class Term>
double blocked_sum(std::int64_t n, Term&& term) {
    constexpr std::int64_t kBlock = 4096;
    if (n <= 0) return 0.0;
    const std::int64_t nblocks = (n + kBlock - 1) / kBlock;
    std::vector<double> partial(static_cast<std::size_t>(nblocks), 0.0);
#pragma omp parallel for schedule(static)
    for (std::int64_t b = 0; b < nblocks; ++b) {
        const std::int64_t hi = std::min(n, (b + 1) * kBlock);
        double s = 0.0;
        for (std::int64_t i = b * kBlock; i < hi; ++i) s += term(i);
        partial[static_cast<std::size_t>(b)] = s;
    }
    double total = 0.0;
    for (double s : partial) total += s;
    return total;
}

}  // namespace lsr
