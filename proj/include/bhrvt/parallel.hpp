#pragma once
// Index-parallel loops. Every grid kernel in the library takes an Exec flag:
// Exec::serial is the reference path kept for testing, Exec::openmp spreads
// independent indices over threads. Results are written by index, so both
// paths produce identical output.

#include <cstddef>
#include <exception>
#include <limits>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace bhrvt {

enum class Exec { serial, openmp };

inline int worker_count() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

// Calls fn(i) for i in [0, n). With Exec::openmp the first exception by index
// is rethrown after the loop.
template <class Fn>
void for_each_index(std::size_t n, Exec exec, Fn&& fn) {
    if (exec == Exec::serial || n < 2) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::exception_ptr first_error;
    std::size_t first_index = std::numeric_limits<std::size_t>::max();
    const long count = static_cast<long>(n);
#pragma omp parallel for schedule(dynamic, 1)
    for (long i = 0; i < count; ++i) {
        try {
            fn(static_cast<std::size_t>(i));
        } catch (...) {
#pragma omp critical(bhrvt_for_each_index)
            {
                if (static_cast<std::size_t>(i) < first_index) {
                    first_index = static_cast<std::size_t>(i);
                    first_error = std::current_exception();
                }
            }
        }
    }
    if (first_error) std::rethrow_exception(first_error);
}

}  // namespace bhrvt
