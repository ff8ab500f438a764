#pragma once
#include <cstddef>
#include <exception>
#include <mutex>

#if defined(_OPENMP)
#include <omp.h>
#endif

namespace kpk {

/// Every parallel kernel also has a serial path; results are required to be
/// bit-identical between the two (each work unit writes only its own slot).
enum class Exec { serial, parallel };

/// Exceptions thrown by a work unit are captured and rethrown after the loop
/// (an exception may not unwind out of an OpenMP region).
template <typename Fn>
void for_each_index(std::size_t n, Exec exec, Fn&& fn) {
#if defined(_OPENMP)
    if (exec == Exec::parallel) {
        std::exception_ptr err;
        std::mutex err_mutex;
#pragma omp parallel for schedule(dynamic)
        for (long long i = 0; i < static_cast<long long>(n); ++i) {
            try {
                fn(static_cast<std::size_t>(i));
            } catch (...) {
                std::lock_guard<std::mutex> lock(err_mutex);
                if (!err) err = std::current_exception();
            }
        }
        if (err) std::rethrow_exception(err);
        return;
    }
#else
    (void)exec;
#endif
    for (std::size_t i = 0; i < n; ++i) fn(i);
}

inline int worker_count(Exec exec) {
#if defined(_OPENMP)
    if (exec == Exec::parallel) return omp_get_max_threads();
#else
    (void)exec;
#endif
    return 1;
}

} // namespace kpk
