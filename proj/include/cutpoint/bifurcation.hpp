#pragma once

// Inverted bifurcation map n -> p_n of the system dn/dt = t(n,p) - 1, its
// stationary points, and the continuous optimal cut-point.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cutpoint/parallel.hpp"
#include "cutpoint/procedures.hpp"

namespace cutpoint {

struct CurvePoint {
  double n = 0.0;
  double p_n = 0.0;
  double dp_dn = 0.0;     // -(dt/dn)/(dt/dp) at (n, p_n)
  double residual = 0.0;  // |t(n, p_n) - 1|
};

struct BifurcationCurve {
  std::string procedure;
  std::vector<CurvePoint> points;  // sorted by n
  double n_lo = 0.0;
  double n_hi = 0.0;
};

enum class BifurcationType { b0, b1, b2 };

std::string_view to_string(BifurcationType type) noexcept;

struct StationaryPoint {
  double n = 0.0;
  double p = 0.0;
  double rate_residual = 0.0;   // |t(n,p) - 1|
  double slope_residual = 0.0;  // |dt/dn(n,p)|
};

struct CutPointResult {
  double cocp = 0.0;
  BifurcationType type = BifurcationType::b1;
  std::optional<double> n_star;
  double limit_at_c = 0.0;
  double limit_at_infinity = 0.0;
  std::vector<StationaryPoint> system_solutions;
  double curve_max = 0.0;
  double curve_argmax_n = 0.0;
};

struct EngineOptions {
  double n_max = 1e6;
  int trace_steps = 1024;
  double c_offset = 1e-6;     // open boundary at c approached at c + offset
  double flatness = 1e-9;     // b0 threshold on max - min of the curve
  double attain_tol = 1e-9;   // stationary p counts as the curve maximum
};

/// Smallest prevalence considered; the domain is open at 0.
inline constexpr double kPrevalenceFloor = 1e-12;

/// Unique root of t(n, p) = 1 in [1e-12, UCP]. Requires n >= c.
/// Throws RootAboveUcpError when t(n, UCP) < 1 and NoRootError when
/// t >= 1 already at the prevalence floor.
double solve_p_n(const ProcedureSpec& proc, double n);

/// Slope of the curve from the implicit-function identity.
double curve_slope(const ProcedureSpec& proc, double n, double p_n);

/// Log-spaced samples on [n_lo, n_hi]. Errors from solve_p_n propagate
/// (they carry the offending n); with several failures the smallest n wins.
BifurcationCurve trace_curve(const ProcedureSpec& proc, double n_lo, double n_hi, int steps,
                             Execution exec = Execution::parallel());

/// Solutions of {t = 1, dt/dn = 0} inside (c, n_max] x (0, UCP], found as
/// zeros of dt/dn along the traced curve and polished by 2-D Newton.
std::vector<StationaryPoint> solve_stationary_system(const ProcedureSpec& proc,
                                                     const EngineOptions& opts = {},
                                                     Execution exec = Execution::parallel());

/// p_n as n -> c+, by linear Richardson extrapolation from c + h and c + 2h.
/// The root at n = c replaces the estimate when it exists and agrees to 1e-9.
double limit_at_c(const ProcedureSpec& proc, const EngineOptions& opts = {});

/// p_n as n -> infinity, quadratic extrapolation in 1/n from
/// n_max/100, n_max/10 and n_max.
double limit_at_infinity(const ProcedureSpec& proc, const EngineOptions& opts = {});

CutPointResult classify_and_find_cocp(const ProcedureSpec& proc, const EngineOptions& opts = {},
                                      Execution exec = Execution::parallel());

/// All roots of t(n, p) = 1 in [1e-12, p_hi] visible on a 1024-point scan
/// (half log-spaced, half linear). Works on the extended domain n > 0.
std::vector<double> scan_all_roots(const ProcedureSpec& proc, double n, double p_hi = ucp(),
                                   int samples = 1024);

/// One row per (n, root) pair over a log grid on [n_lo, n_hi], n_lo > 0.
/// Used for the extended-domain diagram where n may lie below c.
std::vector<CurvePoint> trace_all_roots(const ProcedureSpec& proc, double n_lo, double n_hi,
                                        int steps, double p_hi = ucp(),
                                        Execution exec = Execution::parallel());

}  // namespace cutpoint
