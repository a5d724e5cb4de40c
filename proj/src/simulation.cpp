#include "cutpoint/simulation.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "cutpoint/errors.hpp"

namespace cutpoint {

namespace {

__extension__ typedef unsigned __int128 u128;

constexpr long kMaxLinearCohort = 100000;
constexpr long kMaxArraySide = 1000;

std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

struct ChunkSums {
  std::uint64_t sum = 0;
  std::uint64_t sum_sq = 0;
};

void require_config(const SimConfig& cfg) {
  if (cfg.trials < 1) throw DomainError("simulation needs trials >= 1");
  if (cfg.chunk_size < 1) throw DomainError("simulation needs chunk_size >= 1");
}

// Runs cfg.trials cohorts of `cohort` Bernoulli(p) items through `kernel`.
template <class Kernel>
SimResult run_chunks(const char* name, long n, std::size_t cohort, double p,
                     const SimConfig& cfg, Execution exec, Kernel kernel) {
  require_config(cfg);
  const std::uint64_t chunks = (cfg.trials + cfg.chunk_size - 1) / cfg.chunk_size;
  std::vector<ChunkSums> sums(chunks);

  const auto run_chunk = [&](std::uint64_t k) {
    std::mt19937_64 gen(chunk_seed(cfg.seed, k));
    std::vector<std::uint8_t> items(cohort);
    std::vector<std::uint8_t> identified(cohort);
    const std::uint64_t begin = k * cfg.chunk_size;
    const std::uint64_t end = std::min(cfg.trials, begin + cfg.chunk_size);
    ChunkSums acc;
    for (std::uint64_t t = begin; t < end; ++t) {
      for (auto& item : items) {
        const double u = static_cast<double>(gen() >> 11) * 0x1.0p-53;
        item = u < p ? 1 : 0;
      }
      const std::uint64_t tests = kernel(items, identified);
      assert(std::ranges::equal(items, identified));
      acc.sum += tests;
      acc.sum_sq += tests * tests;
    }
    sums[k] = acc;
  };

  const auto count = static_cast<std::ptrdiff_t>(chunks);
  if (exec.is_serial()) {
    for (std::ptrdiff_t k = 0; k < count; ++k) run_chunk(static_cast<std::uint64_t>(k));
  } else {
#pragma omp parallel for schedule(dynamic, 1) num_threads(exec.threads())
    for (std::ptrdiff_t k = 0; k < count; ++k) run_chunk(static_cast<std::uint64_t>(k));
  }

  // Integer sums: the reduction is exact, so the order of chunks is irrelevant.
  u128 total = 0;
  u128 total_sq = 0;
  for (const auto& s : sums) {
    total += s.sum;
    total_sq += s.sum_sq;
  }
  const auto trials = static_cast<long double>(cfg.trials);
  SimResult out;
  out.procedure = name;
  out.n = n;
  out.p = p;
  out.trials = cfg.trials;
  out.seed = cfg.seed;
  out.mean_tests = static_cast<double>(static_cast<long double>(total) / trials);
  if (cfg.trials > 1) {
    // T * S2 - S1^2 >= 0 exactly in integers.
    const u128 spread =
        static_cast<u128>(cfg.trials) * total_sq - total * total;
    const long double variance =
        static_cast<long double>(spread) / (trials * (trials - 1.0L));
    out.std_error = static_cast<double>(std::sqrt(variance / trials));
  }
  return out;
}

void require_cohort(long n, long min_n, long max_n, const char* who) {
  if (n < min_n || n > max_n) {
    throw DomainError(std::string(who) + ": cohort parameter n=" + std::to_string(n) +
                      " outside [" + std::to_string(min_n) + ", " + std::to_string(max_n) + "]");
  }
}

}  // namespace

std::uint64_t chunk_seed(std::uint64_t seed, std::uint64_t chunk_index) noexcept {
  return mix64(mix64(seed) ^ mix64(chunk_index + 0x632be59bd9b4e019ULL));
}

unsigned run_dorfman(std::span<const std::uint8_t> items, std::span<std::uint8_t> identified) {
  std::ranges::fill(identified, 0);
  const bool positive = std::ranges::any_of(items, [](std::uint8_t x) { return x != 0; });
  if (!positive) return 1;
  std::ranges::copy(items, identified.begin());
  return 1 + static_cast<unsigned>(items.size());
}

unsigned run_md(std::span<const std::uint8_t> items, std::span<std::uint8_t> identified) {
  std::ranges::fill(identified, 0);
  const bool positive = std::ranges::any_of(items, [](std::uint8_t x) { return x != 0; });
  if (!positive) return 1;
  unsigned tests = 1;
  bool seen_positive = false;
  const std::size_t last = items.size() - 1;
  for (std::size_t i = 0; i < last; ++i) {
    ++tests;
    identified[i] = items[i];
    seen_positive = seen_positive || items[i] != 0;
  }
  if (seen_positive) {
    ++tests;
    identified[last] = items[last];
  } else {
    identified[last] = 1;  // the positive pool forces it
  }
  return tests;
}

unsigned run_sterrett(std::span<const std::uint8_t> items, std::span<std::uint8_t> identified) {
  std::ranges::fill(identified, 0);
  unsigned tests = 0;
  std::size_t start = 0;
  const std::size_t size = items.size();
  while (start < size) {
    ++tests;  // pool of the untested remainder
    const auto rest = items.subspan(start);
    if (std::ranges::none_of(rest, [](std::uint8_t x) { return x != 0; })) break;
    std::size_t i = start;
    for (;; ++i) {
      if (i == size - 1) {
        identified[i] = 1;  // every earlier item tested negative
        break;
      }
      ++tests;
      if (items[i] != 0) {
        identified[i] = 1;
        break;
      }
    }
    start = i + 1;
  }
  return tests;
}

unsigned run_a2(std::span<const std::uint8_t> items, int n, std::span<std::uint8_t> identified) {
  std::ranges::fill(identified, 0);
  const auto side = static_cast<std::size_t>(n);
  thread_local std::vector<std::uint8_t> row;
  thread_local std::vector<std::uint8_t> col;
  row.assign(side, 0);
  col.assign(side, 0);
  for (std::size_t r = 0; r < side; ++r) {
    for (std::size_t c = 0; c < side; ++c) {
      if (items[r * side + c] != 0) {
        row[r] = 1;
        col[c] = 1;
      }
    }
  }
  unsigned tests = 2 * static_cast<unsigned>(n);
  for (std::size_t r = 0; r < side; ++r) {
    if (row[r] == 0) continue;
    for (std::size_t c = 0; c < side; ++c) {
      if (col[c] == 0) continue;
      ++tests;
      identified[r * side + c] = items[r * side + c];
    }
  }
  return tests;
}

SimResult simulate_dorfman(long n, Prevalence p, const SimConfig& cfg, Execution exec) {
  require_cohort(n, 2, kMaxLinearCohort, "dorfman");
  return run_chunks("dorfman", n, static_cast<std::size_t>(n), p.p(), cfg, exec, run_dorfman);
}

SimResult simulate_md(long n, Prevalence p, const SimConfig& cfg, Execution exec) {
  require_cohort(n, 2, kMaxLinearCohort, "md");
  return run_chunks("md", n, static_cast<std::size_t>(n), p.p(), cfg, exec, run_md);
}

SimResult simulate_sterrett(long n, Prevalence p, const SimConfig& cfg, Execution exec) {
  require_cohort(n, 1, kMaxLinearCohort, "sterrett");
  return run_chunks("sterrett", n, static_cast<std::size_t>(n), p.p(), cfg, exec, run_sterrett);
}

SimResult simulate_a2(long n, Prevalence p, const SimConfig& cfg, Execution exec) {
  require_cohort(n, 2, kMaxArraySide, "a2");
  const int side = static_cast<int>(n);
  return run_chunks("a2", n, static_cast<std::size_t>(n * n), p.p(), cfg, exec,
                    [side](std::span<const std::uint8_t> items, std::span<std::uint8_t> out) {
                      return run_a2(items, side, out);
                    });
}

SimResult simulate(const ProcedureSpec& proc, long n, Prevalence p, const SimConfig& cfg,
                   Execution exec) {
  if (proc.name == "dorfman") return simulate_dorfman(n, p, cfg, exec);
  if (proc.name == "md") return simulate_md(n, p, cfg, exec);
  if (proc.name == "sterrett") return simulate_sterrett(n, p, cfg, exec);
  if (proc.name == "a2") return simulate_a2(n, p, cfg, exec);
  throw NotSimulatableError(std::string(proc.name));
}

}  // namespace cutpoint
