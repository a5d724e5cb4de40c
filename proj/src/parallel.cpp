#include "cutpoint/parallel.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <cstring>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace cutpoint {

int worker_count() {
#ifdef _OPENMP
  int n = omp_get_max_threads();
#else
  int n = 1;
#endif
  if (const char* env = std::getenv("CUTPOINT_THREADS")) {
    int cap = 0;
    const char* end = env + std::strlen(env);
    auto [ptr, ec] = std::from_chars(env, end, cap);
    if (ec == std::errc() && ptr == end && cap > 0) n = std::min(n, cap);
  }
  return std::max(n, 1);
}

int Execution::threads() const {
  if (serial_) return 1;
  return threads_ > 0 ? threads_ : worker_count();
}

}  // namespace cutpoint
