#pragma once

// Monte-Carlo simulation of the pooled testing protocols. Trials run in
// fixed-size chunks; chunk k draws from its own generator seeded by
// hash(seed, k), and chunk sums are integers, so a result depends only on
// (trials, seed, chunk_size) and never on the worker count.

#include <cstdint>
#include <span>
#include <string>

#include "cutpoint/parallel.hpp"
#include "cutpoint/procedures.hpp"

namespace cutpoint {

struct SimConfig {
  std::uint64_t trials = 1'000'000;
  std::uint64_t seed = 0;
  std::uint64_t chunk_size = 16384;
};

struct SimResult {
  std::string procedure;
  long n = 0;
  double p = 0.0;
  double mean_tests = 0.0;
  double std_error = 0.0;  // sample std / sqrt(trials)
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
};

/// Generator seed for one chunk.
std::uint64_t chunk_seed(std::uint64_t seed, std::uint64_t chunk_index) noexcept;

// Protocol kernels. Each returns the number of tests spent on one cohort and
// writes the status it infers for every item into `identified`
// (1 = defective). `items` holds the drawn truth.
unsigned run_dorfman(std::span<const std::uint8_t> items, std::span<std::uint8_t> identified);
/// Dorfman, except the last individual test is skipped when all earlier
/// ones were negative.
unsigned run_md(std::span<const std::uint8_t> items, std::span<std::uint8_t> identified);
/// Pool test; on a positive pool, test one by one until the first positive
/// (the last item is inferred when all before it were negative), then
/// restart on the untested remainder.
unsigned run_sterrett(std::span<const std::uint8_t> items, std::span<std::uint8_t> identified);
/// Row-major n x n array: 2n line pools, then individual tests on cells
/// whose row and column pools are both positive.
unsigned run_a2(std::span<const std::uint8_t> items, int n, std::span<std::uint8_t> identified);

SimResult simulate_dorfman(long n, Prevalence p, const SimConfig& cfg,
                           Execution exec = Execution::parallel());
SimResult simulate_md(long n, Prevalence p, const SimConfig& cfg,
                      Execution exec = Execution::parallel());
SimResult simulate_sterrett(long n, Prevalence p, const SimConfig& cfg,
                            Execution exec = Execution::parallel());
SimResult simulate_a2(long n, Prevalence p, const SimConfig& cfg,
                      Execution exec = Execution::parallel());

/// Dispatch by registry entry; throws NotSimulatableError for pt/halving.
SimResult simulate(const ProcedureSpec& proc, long n, Prevalence p, const SimConfig& cfg,
                   Execution exec = Execution::parallel());

}  // namespace cutpoint
