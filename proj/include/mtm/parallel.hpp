#pragma once

#include <cstddef>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace mtm {

//! Execution policy for the grid kernels. `serial` is the reference path used
//! by the equivalence tests; `parallel` uses OpenMP when compiled in.
enum class Exec { serial, parallel };

namespace par {

//! Evaluates fn(i) for i in [0, n) into a vector.
//!
//! The parallel path only distributes independent per-element evaluations and
//! writes each result to its own slot, so results are bitwise identical to the
//! serial path; any reduction over the returned vector stays serial. That is
//! the determinism contract the tests rely on.
template <class T, class Fn>
std::vector<T> map(std::size_t n, Fn&& fn, Exec exec = Exec::parallel) {
  std::vector<T> out(n);
  if (exec == Exec::parallel) {
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 1)
#endif
    for (long long i = 0; i < static_cast<long long>(n); ++i) {
      out[static_cast<std::size_t>(i)] = fn(static_cast<std::size_t>(i));
    }
  } else {
    for (std::size_t i = 0; i < n; ++i) out[i] = fn(i);
  }
  return out;
}

inline int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

inline bool compiled_with_openmp() {
#ifdef _OPENMP
  return true;
#else
  return false;
#endif
}

}  // namespace par
}  // namespace mtm
