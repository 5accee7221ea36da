#pragma once

#include <cstddef>
#include <exception>

namespace ldforge {

// Batch lanes for per-sample work. Serial is the plain reference loop;
// Parallel runs the same body under OpenMP worksharing. Bodies must
// write only to their own index's slot so both lanes give identical
// results; the bench tool compares their wall time.
enum class ExecMode { Serial, Parallel };

template <typename Fn>
void for_each_index(std::size_t n, ExecMode mode, Fn&& fn) {
  if (mode == ExecMode::Serial) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::exception_ptr err = nullptr;
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
  for (long long i = 0; i < static_cast<long long>(n); ++i) {
    try {
      fn(static_cast<std::size_t>(i));
    } catch (...) {
#pragma omp critical
      if (!err) err = std::current_exception();
    }
  }
#else
  for (std::size_t i = 0; i < n; ++i) fn(i);
#endif
  if (err) std::rethrow_exception(err);
}

}  // namespace ldforge
