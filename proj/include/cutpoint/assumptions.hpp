#pragma once

// Numerical audit of the modelling assumptions (M0)-(M4) on finite grids.
// (M1), differentiability of the continuous extension, is not checkable and
// is reported as the procedure's trust flag.

#include <optional>
#include <string>
#include <vector>

#include "cutpoint/parallel.hpp"
#include "cutpoint/procedures.hpp"

namespace cutpoint {

struct M0Check {
  double c = 0.0;
  bool pass = false;
};

struct M1Check {
  bool trusted = false;
};

/// Consecutive grid prevalences at a fixed n where M failed to increase.
struct MonotonicityViolation {
  double n = 0.0;
  double p_lo = 0.0;
  double p_hi = 0.0;
  double mean_lo = 0.0;
  double mean_hi = 0.0;
};

struct M2Check {
  bool pass = false;
  std::optional<MonotonicityViolation> violation;
  // Pairs where M(n, .) is flat to within rounding (q^n underflow at large n).
  std::size_t saturated_pairs = 0;
};

enum class CriticalKind { minimum, maximum, inflection };

struct CriticalPoint {
  double n = 0.0;
  double rate = 0.0;   // t(n, p)
  double slope = 0.0;  // dt/dn(n, p)
  CriticalKind kind = CriticalKind::minimum;
};

struct M3Check {
  bool pass = false;
  double min_rate_at_ucp = 0.0;
  double argmin_n = 0.0;
  std::optional<double> violation_n;
  // Interior extrema of n -> t(n, UCP) over the grid span (continuous only).
  std::vector<CriticalPoint> extrema;
};

struct M4Witness {
  double n = 0.0;
  std::optional<double> p;  // some p with t(n, p) < 1
};

struct M4Check {
  bool pass = false;
  std::vector<M4Witness> witnesses;
  std::optional<double> violation_n;
};

struct AssumptionReport {
  std::string procedure;
  M0Check m0;
  M1Check m1;
  M2Check m2;
  M3Check m3;
  M4Check m4;

  bool all_pass() const noexcept {
    return m0.pass && m1.trusted && m2.pass && m3.pass && m4.pass;
  }
  /// Labels such as "(M1)" for every failed or untrusted assumption.
  std::vector<std::string> violated() const;
};

/// 128 log-spaced points on (c + 1e-3, 1e6]; integers ceil(c)..50 for
/// integer-only procedures.
std::vector<double> default_n_grid(const ProcedureSpec& proc);
/// 128 log-spaced points on [1e-12, UCP].
std::vector<double> default_p_grid();

M0Check check_m0(const ProcedureSpec& proc);
M2Check check_m2(const ProcedureSpec& proc, const std::vector<double>& n_grid,
                 const std::vector<double>& p_grid, Execution exec = Execution::parallel());
M3Check check_m3(const ProcedureSpec& proc, const std::vector<double>& n_grid,
                 Execution exec = Execution::parallel());
M4Check check_m4(const ProcedureSpec& proc, const std::vector<double>& n_grid,
                 Execution exec = Execution::parallel());

AssumptionReport check_assumptions(const ProcedureSpec& proc,
                                   Execution exec = Execution::parallel());

/// Shape of n -> t(n, p) on [n_lo, n_hi]: zeros of dt/dn (extrema) and of
/// d2t/dn2 (inflections), located on a log scan and refined by bisection.
struct RateProfile {
  std::vector<CriticalPoint> extrema;
  std::vector<CriticalPoint> inflections;
};

RateProfile rate_profile(const ProcedureSpec& proc, double p, double n_lo, double n_hi,
                         std::size_t samples = 4096);

}  // namespace cutpoint
