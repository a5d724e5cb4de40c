#include "cutpoint/discrete.hpp"

#include <cmath>
#include <string>

#include "cutpoint/errors.hpp"

namespace cutpoint {

namespace {

std::optional<double> try_solve(const ProcedureSpec& proc, double n) {
  try {
    return solve_p_n(proc, n);
  } catch (const NoRootError&) {
    return std::nullopt;
  } catch (const RootAboveUcpError&) {
    return std::nullopt;
  }
}

long first_integer(const ProcedureSpec& proc, bool include_c) {
  const double start = std::ceil(proc.c);
  if (!include_c && start == proc.c) return static_cast<long>(start) + 1;
  return static_cast<long>(start);
}

}  // namespace

std::string_view to_string(DocpMethod method) noexcept {
  return method == DocpMethod::remark1 ? "remark1" : "bruteforce";
}

std::optional<DiscreteCutPoint> docp_remark1(const ProcedureSpec& proc,
                                             const CutPointResult& result) {
  if (result.type == BifurcationType::b1 || !result.n_star) return std::nullopt;
  const double lo = std::floor(*result.n_star);
  const double hi = std::ceil(*result.n_star);

  std::optional<DiscreteCutPoint> best;
  for (double m : {lo, hi}) {
    if (m < proc.c) continue;
    const auto p = try_solve(proc, m);
    if (p && (!best || *p > best->docp)) {
      best = DiscreteCutPoint{*p, static_cast<long>(m), DocpMethod::remark1, result.cocp - *p};
    }
  }
  if (!best) {
    throw DomainError(std::string(proc.name) + ": no integer neighbour of n* carries a root");
  }
  return best;
}

IntegerScan integer_scan(const ProcedureSpec& proc, long n_max, bool include_c, Execution exec) {
  IntegerScan scan;
  scan.first_n = first_integer(proc, include_c);
  if (n_max < scan.first_n) return scan;
  scan.p_n.resize(static_cast<std::size_t>(n_max - scan.first_n + 1));

  const auto count = static_cast<std::ptrdiff_t>(scan.p_n.size());
  const auto solve = [&](std::ptrdiff_t i) {
    scan.p_n[static_cast<std::size_t>(i)] =
        try_solve(proc, static_cast<double>(scan.first_n + i));
  };
  if (exec.is_serial()) {
    for (std::ptrdiff_t i = 0; i < count; ++i) solve(i);
  } else {
#pragma omp parallel for schedule(static) num_threads(exec.threads())
    for (std::ptrdiff_t i = 0; i < count; ++i) solve(i);
  }
  return scan;
}

bool tail_decreasing(const IntegerScan& scan, long from) {
  std::optional<double> prev;
  for (std::size_t i = 0; i < scan.p_n.size(); ++i) {
    if (scan.first_n + static_cast<long>(i) < from) continue;
    const auto& cur = scan.p_n[i];
    if (!cur) continue;
    if (prev && *cur > *prev) return false;
    prev = cur;
  }
  return true;
}

DiscreteCutPoint docp_bruteforce(const ProcedureSpec& proc, long n_max, bool include_c,
                                 Execution exec) {
  const long first = first_integer(proc, include_c);
  if (n_max < first + 1) {
    throw DomainError("docp_bruteforce: n_max must be at least " + std::to_string(first + 1));
  }
  const IntegerScan scan = integer_scan(proc, n_max, include_c, exec);
  std::optional<DiscreteCutPoint> best;
  for (std::size_t i = 0; i < scan.p_n.size(); ++i) {
    const auto& p = scan.p_n[i];
    if (p && (!best || *p > best->docp)) {
      best = DiscreteCutPoint{*p, scan.first_n + static_cast<long>(i), DocpMethod::bruteforce, {}};
    }
  }
  if (!best) throw DomainError(std::string(proc.name) + ": no integer cohort carries a root");
  return *best;
}

}  // namespace cutpoint
