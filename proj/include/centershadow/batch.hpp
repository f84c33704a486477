#pragma once

#ifdef _OPENMP
#include <omp.h>
#endif

namespace cshadow {

// Independent-trial driver. fn(i) must write only to slot i of any shared
// output, so the parallel path is bitwise identical to the serial one.
template <class F>
void run_batch(int n, bool parallel, F&& fn) {
  if (parallel) {
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
    for (int i = 0; i < n; ++i) fn(i);
  } else {
    for (int i = 0; i < n; ++i) fn(i);
  }
}

inline int batch_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

} // namespace cshadow
