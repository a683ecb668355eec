#pragma once

#include <exception>

#include "rydberg/measurement.hpp"

namespace rydberg::detail {

// Runs body(i) for i in [0, n), either serially or as an OpenMP loop.
// Exceptions thrown inside the parallel region are captured and the first
// one is rethrown after the loop. Callers write results to slot i only, so
// the outcome does not depend on the thread count.
template <class Body>
void for_each_index(long n, Execution execution, Body&& body) {
    if (execution == Execution::serial) {
        for (long i = 0; i < n; ++i) {
            body(i);
        }
        return;
    }
    std::exception_ptr failure;
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (long i = 0; i < n; ++i) {
        try {
            body(i);
        } catch (...) {
#ifdef _OPENMP
#pragma omp critical(rydberg_for_each_failure)
#endif
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
}

} // namespace rydberg::detail
