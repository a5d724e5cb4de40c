#pragma once

// Execution policy shared by the data-parallel kernels. Every kernel keeps a
// plain serial loop as the reference path; the OpenMP path must produce
// bit-identical output for any worker count.

namespace cutpoint {

/// Upper bound on OpenMP workers: omp_get_max_threads(), capped by the
/// CUTPOINT_THREADS environment variable when it holds a positive integer.
int worker_count();

class Execution {
public:
  static Execution serial() noexcept { return Execution(0, true); }
  /// threads == 0 uses worker_count().
  static Execution parallel(int threads = 0) noexcept { return Execution(threads, false); }

  bool is_serial() const noexcept { return serial_; }
  int threads() const;

private:
  Execution(int threads, bool serial) noexcept : threads_(threads), serial_(serial) {}
  int threads_;
  bool serial_;
};

}  // namespace cutpoint
