#ifndef BILICOVER_PARALLEL_HPP
#define BILICOVER_PARALLEL_HPP

#include <cstdint>

#include <omp.h>

namespace bilicover {

// Execution mode for the data-parallel kernels. Every OpenMP kernel in
// the project has a serial twin that produces bit-identical output
// (work is keyed by index, never by completion order); tests compare
// the two and the perf-compare tool times them.
enum class Exec { Serial, OpenMP };

inline int max_threads() { return omp_get_max_threads(); }

template <typename Fn>
void parallel_for(std::int64_t n, Exec exec, Fn&& fn) {
  if (exec == Exec::OpenMP) {
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < n; ++i) fn(i);
  } else {
    for (std::int64_t i = 0; i < n; ++i) fn(i);
  }
}

// Same, but each worker gets one scratch object built by `make` and
// reused across its iterations (keeps hot loops allocation-free).
template <typename Make, typename Fn>
void parallel_for_scratch(std::int64_t n, Exec exec, Make&& make, Fn&& fn) {
  if (exec == Exec::OpenMP) {
#pragma omp parallel
    {
      auto scratch = make();
#pragma omp for schedule(static)
      for (std::int64_t i = 0; i < n; ++i) fn(i, scratch);
    }
  } else {
    auto scratch = make();
    for (std::int64_t i = 0; i < n; ++i) fn(i, scratch);
  }
}

}  // namespace bilicover

#endif  // BILICOVER_PARALLEL_HPP
