#include "cutpoint/assumptions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cutpoint/errors.hpp"
#include "cutpoint/roots.hpp"

namespace cutpoint {

namespace {

constexpr double kM3Margin = 1e-12;
constexpr std::size_t kGridPoints = 128;

void require_n_domain(const ProcedureSpec& proc, const std::vector<double>& n_grid) {
  for (double n : n_grid) {
    if (!(n >= proc.c) || !std::isfinite(n)) {
      throw DomainError(std::string(proc.name) + ": grid n=" + std::to_string(n) +
                        " lies below c");
    }
  }
}

void require_p_domain(const std::vector<double>& p_grid) {
  const double top = ucp() * (1.0 + 1e-15);
  for (std::size_t i = 0; i < p_grid.size(); ++i) {
    if (!(p_grid[i] > 0.0 && p_grid[i] <= top)) {
      throw DomainError("p grid must lie in (0, UCP]");
    }
    if (i > 0 && !(p_grid[i] > p_grid[i - 1])) {
      throw DomainError("p grid must be strictly increasing");
    }
  }
}

// Runs body(i) for every index, serially or across OpenMP workers.
template <class Body>
void for_each_index(std::size_t count, Execution exec, Body&& body) {
  const auto last = static_cast<std::ptrdiff_t>(count);
  if (exec.is_serial()) {
    for (std::ptrdiff_t i = 0; i < last; ++i) body(static_cast<std::size_t>(i));
  } else {
#pragma omp parallel for schedule(static) num_threads(exec.threads())
    for (std::ptrdiff_t i = 0; i < last; ++i) body(static_cast<std::size_t>(i));
  }
}

struct M2Row {
  std::optional<MonotonicityViolation> violation;
  std::size_t saturated = 0;
};

M2Row audit_monotone_row(const ProcedureSpec& proc, double n, const std::vector<double>& p_grid) {
  constexpr double eps = std::numeric_limits<double>::epsilon();
  M2Row row;
  std::size_t rising = 0;
  double prev = proc.mean(n, p_grid.front());
  for (std::size_t i = 0; i + 1 < p_grid.size(); ++i) {
    const double next = proc.mean(n, p_grid[i + 1]);
    const double diff = next - prev;
    if (diff > 0.0) {
      ++rising;
    } else if (std::abs(diff) <= 8.0 * eps * std::max(std::abs(prev), std::abs(next))) {
      ++row.saturated;
    } else if (!row.violation) {
      row.violation = MonotonicityViolation{n, p_grid[i], p_grid[i + 1], prev, next};
    }
    prev = next;
  }
  if (proc.dt_dp) {
    for (double p : p_grid) {
      const double d = proc.dt_dp(n, p);
      if (d == 0.0) {
        ++row.saturated;
      } else if (!(d > 0.0) && !row.violation) {
        row.violation = MonotonicityViolation{n, p, p, proc.mean(n, p), proc.mean(n, p)};
      }
    }
  }
  if (rising == 0 && !row.violation && p_grid.size() > 1) {
    row.violation = MonotonicityViolation{n, p_grid.front(), p_grid.back(),
                                          proc.mean(n, p_grid.front()),
                                          proc.mean(n, p_grid.back())};
  }
  return row;
}

CriticalPoint make_point(const ProcedureSpec& proc, double n, double p, CriticalKind kind) {
  return CriticalPoint{n, proc.rate(n, p), partial_n(proc, n, p), kind};
}

}  // namespace

std::vector<std::string> AssumptionReport::violated() const {
  std::vector<std::string> out;
  if (!m0.pass) out.emplace_back("(M0)");
  if (!m1.trusted) out.emplace_back("(M1)");
  if (!m2.pass) out.emplace_back("(M2)");
  if (!m3.pass) out.emplace_back("(M3)");
  if (!m4.pass) out.emplace_back("(M4)");
  return out;
}

std::vector<double> default_n_grid(const ProcedureSpec& proc) {
  if (proc.integer_only) {
    std::vector<double> out;
    for (double n = std::ceil(proc.c); n <= 50.0; n += 1.0) out.push_back(n);
    return out;
  }
  return log_space(proc.c + 1e-3, 1e6, kGridPoints);
}

std::vector<double> default_p_grid() { return log_space(1e-12, ucp(), kGridPoints); }

M0Check check_m0(const ProcedureSpec& proc) { return M0Check{proc.c, proc.c >= 2.0}; }

M2Check check_m2(const ProcedureSpec& proc, const std::vector<double>& n_grid,
                 const std::vector<double>& p_grid, Execution exec) {
  require_n_domain(proc, n_grid);
  require_p_domain(p_grid);
  std::vector<M2Row> rows(n_grid.size());
  if (!p_grid.empty()) {
    for_each_index(n_grid.size(), exec,
                   [&](std::size_t i) { rows[i] = audit_monotone_row(proc, n_grid[i], p_grid); });
  }
  M2Check out;
  out.pass = true;
  for (const auto& row : rows) {
    out.saturated_pairs += row.saturated;
    if (row.violation && out.pass) {
      out.pass = false;
      out.violation = row.violation;
    }
  }
  return out;
}

M3Check check_m3(const ProcedureSpec& proc, const std::vector<double>& n_grid, Execution exec) {
  require_n_domain(proc, n_grid);
  const double top = ucp();
  std::vector<double> rates(n_grid.size());
  for_each_index(n_grid.size(), exec, [&](std::size_t i) { rates[i] = proc.rate(n_grid[i], top); });

  M3Check out;
  out.pass = true;
  out.min_rate_at_ucp = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n_grid.size(); ++i) {
    if (rates[i] < out.min_rate_at_ucp) {
      out.min_rate_at_ucp = rates[i];
      out.argmin_n = n_grid[i];
    }
    if (!(rates[i] - 1.0 > kM3Margin) && out.pass) {
      out.pass = false;
      out.violation_n = n_grid[i];
    }
  }
  if (!proc.integer_only && n_grid.size() >= 2) {
    const auto [lo, hi] = std::ranges::minmax_element(n_grid);
    out.extrema = rate_profile(proc, top, *lo, *hi).extrema;
  }
  return out;
}

M4Check check_m4(const ProcedureSpec& proc, const std::vector<double>& n_grid, Execution exec) {
  require_n_domain(proc, n_grid);
  // Open at UCP: drop the last point of the log scan.
  std::vector<double> scan = log_space(1e-12, ucp(), kGridPoints + 1);
  scan.pop_back();

  M4Check out;
  out.witnesses.resize(n_grid.size());
  for_each_index(n_grid.size(), exec, [&](std::size_t i) {
    std::vector<std::size_t> below;
    for (std::size_t k = 0; k < scan.size(); ++k) {
      if (proc.rate(n_grid[i], scan[k]) < 1.0) below.push_back(k);
    }
    out.witnesses[i].n = n_grid[i];
    if (!below.empty()) out.witnesses[i].p = scan[below[below.size() / 2]];
  });
  out.pass = true;
  for (const auto& w : out.witnesses) {
    if (!w.p && out.pass) {
      out.pass = false;
      out.violation_n = w.n;
    }
  }
  return out;
}

AssumptionReport check_assumptions(const ProcedureSpec& proc, Execution exec) {
  const std::vector<double> n_grid = default_n_grid(proc);
  AssumptionReport report;
  report.procedure = std::string(proc.name);
  report.m0 = check_m0(proc);
  report.m1 = M1Check{proc.satisfies_m1};
  report.m2 = check_m2(proc, n_grid, default_p_grid(), exec);
  report.m3 = check_m3(proc, n_grid, exec);
  report.m4 = check_m4(proc, n_grid, exec);
  return report;
}

RateProfile rate_profile(const ProcedureSpec& proc, double p, double n_lo, double n_hi,
                         std::size_t samples) {
  if (proc.integer_only) throw DomainError("rate_profile needs a continuous procedure");
  const std::vector<double> grid = log_space(n_lo, n_hi, samples);
  RateProfile out;
  const auto slope = [&proc, p](double n) { return partial_n(proc, n, p); };
  const auto curvature = [&proc, p](double n) { return partial_nn(proc, n, p); };
  for (double n : sign_change_roots(slope, grid)) {
    const CriticalKind kind =
        partial_nn(proc, n, p) > 0.0 ? CriticalKind::minimum : CriticalKind::maximum;
    out.extrema.push_back(make_point(proc, n, p, kind));
  }
  for (double n : sign_change_roots(curvature, grid)) {
    out.inflections.push_back(make_point(proc, n, p, CriticalKind::inflection));
  }
  return out;
}

}  // namespace cutpoint
