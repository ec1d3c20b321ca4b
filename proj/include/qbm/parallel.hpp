// parallel.hpp — thin OpenMP shim; everything compiles serially without it

#pragma once

#if defined(QBM_HAVE_OPENMP)
#include <omp.h>
#endif

namespace qbm::parallel {

inline int max_threads() {
#if defined(QBM_HAVE_OPENMP)
    return omp_get_max_threads();
#else
    return 1;
#endif
}

inline void set_threads(int n) {
#if defined(QBM_HAVE_OPENMP)
    if (n > 0) omp_set_num_threads(n);
#else
    (void)n;
#endif
}

inline bool enabled() {
#if defined(QBM_HAVE_OPENMP)
    return true;
#else
    return false;
#endif
}

} // namespace qbm::parallel
