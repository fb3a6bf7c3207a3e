#pragma once

#include <cstddef>
#include <cstdlib>
#include <exception>
#include <functional>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace freeconv {

// Worker count: FREECONV_THREADS wins, then the OpenMP default.
inline int thread_count() {
    if (const char* env = std::getenv("FREECONV_THREADS")) {
        int n = std::atoi(env);
        if (n > 0) return n;
    }
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

// Runs fn(begin, end) over contiguous chunks of [0, n). The partition depends
// only on n and chunk, never on the worker count, so results are identical
// between the serial reference path and the parallel one. Within a chunk the
// caller is free to warm-start element i from element i-1. The first exception
// thrown by any chunk is rethrown after the loop joins.
template <class Fn>
void chunked_for(std::size_t n, std::size_t chunk, Fn&& fn, bool serial = false) {
    if (n == 0) return;
    if (chunk == 0) chunk = 1;
    std::size_t nchunks = (n + chunk - 1) / chunk;
    if (serial || nchunks == 1) {
        for (std::size_t c = 0; c < nchunks; ++c)
            fn(c * chunk, std::min(n, (c + 1) * chunk));
        return;
    }
    std::exception_ptr first_error;
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) num_threads(thread_count())
#endif
    for (long long c = 0; c < (long long)nchunks; ++c) {
        try {
            fn(std::size_t(c) * chunk, std::min(n, (std::size_t(c) + 1) * chunk));
        } catch (...) {
#ifdef _OPENMP
#pragma omp critical(freeconv_chunked_for)
#endif
            if (!first_error) first_error = std::current_exception();
        }
    }
    if (first_error) std::rethrow_exception(first_error);
}

}  // namespace freeconv
