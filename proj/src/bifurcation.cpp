#include "cutpoint/bifurcation.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <string>

#include "cutpoint/errors.hpp"
#include "cutpoint/roots.hpp"

namespace cutpoint {

namespace {

constexpr double kBoundaryRootTol = 1e-12;

StationaryPoint polish(const ProcedureSpec& proc, double n, double p) {
  StationaryPoint best{n, p, std::abs(proc.rate(n, p) - 1.0), std::abs(partial_n(proc, n, p))};
  double x = n;
  double y = p;
  for (int iter = 0; iter < 40; ++iter) {
    const double f1 = proc.rate(x, y) - 1.0;
    const double f2 = partial_n(proc, x, y);
    const double j11 = f2;
    const double j12 = partial_p(proc, x, y);
    const double j21 = partial_nn(proc, x, y);
    const double j22 = partial_np(proc, x, y);
    const double det = j11 * j22 - j12 * j21;
    if (det == 0.0 || !std::isfinite(det)) break;
    const double dx = (f1 * j22 - f2 * j12) / det;
    const double dy = (j11 * f2 - j21 * f1) / det;
    const double nx = x - dx;
    const double ny = y - dy;
    if (!(nx > proc.c) || !(ny > 0.0) || !(ny <= ucp())) break;
    x = nx;
    y = ny;
    const StationaryPoint cand{x, y, std::abs(proc.rate(x, y) - 1.0),
                               std::abs(partial_n(proc, x, y))};
    if (std::max(cand.rate_residual, cand.slope_residual) <=
        std::max(best.rate_residual, best.slope_residual)) {
      best = cand;
    }
    if (std::abs(dx) <= 1e-15 * std::abs(x) && std::abs(dy) <= 1e-17) break;
  }
  return best;
}

std::vector<StationaryPoint> stationary_from_curve(const ProcedureSpec& proc,
                                                   const BifurcationCurve& curve,
                                                   const EngineOptions& opts) {
  const auto slope_along_curve = [&proc](double n) {
    return partial_n(proc, n, solve_p_n(proc, n));
  };
  std::vector<StationaryPoint> out;
  const auto& pts = curve.points;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    const double g0 = partial_n(proc, pts[i].n, pts[i].p_n);
    const double g1 = partial_n(proc, pts[i + 1].n, pts[i + 1].p_n);
    if (!std::isfinite(g0) || !std::isfinite(g1) || g1 == 0.0) continue;
    double n_root = 0.0;
    if (g0 == 0.0) {
      n_root = pts[i].n;
    } else if ((g0 < 0.0) != (g1 < 0.0)) {
      n_root = bisect(slope_along_curve, pts[i].n, pts[i + 1].n, g0);
    } else {
      continue;
    }
    const StationaryPoint sp = polish(proc, n_root, solve_p_n(proc, n_root));
    if (sp.n > proc.c && sp.n <= opts.n_max && sp.p > 0.0 && sp.p <= ucp()) out.push_back(sp);
  }
  std::ranges::sort(out, {}, &StationaryPoint::n);
  return out;
}

}  // namespace

std::string_view to_string(BifurcationType type) noexcept {
  switch (type) {
    case BifurcationType::b0: return "b0";
    case BifurcationType::b1: return "b1";
    case BifurcationType::b2: return "b2";
  }
  return "?";
}

double solve_p_n(const ProcedureSpec& proc, double n) {
  if (!(n >= proc.c)) {
    throw DomainError(std::string(proc.name) + ": solve_p_n needs n >= c, got " +
                      std::to_string(n));
  }
  const double top = ucp();
  const auto excess = [&proc, n](double p) { return proc.rate(n, p) - 1.0; };
  const double f_top = excess(top);
  if (std::abs(f_top) <= kBoundaryRootTol) return top;
  if (f_top < 0.0) throw RootAboveUcpError(n);
  const double f_floor = excess(kPrevalenceFloor);
  if (f_floor == 0.0) return kPrevalenceFloor;
  if (f_floor > 0.0) throw NoRootError(n);
  return bisect(excess, kPrevalenceFloor, top, f_floor);
}

double curve_slope(const ProcedureSpec& proc, double n, double p_n) {
  return -partial_n(proc, n, p_n) / partial_p(proc, n, p_n);
}

BifurcationCurve trace_curve(const ProcedureSpec& proc, double n_lo, double n_hi, int steps,
                             Execution exec) {
  if (!(n_lo >= proc.c) || !(n_hi > n_lo) || steps < 2) {
    throw DomainError("trace_curve: need c <= n_lo < n_hi and steps >= 2");
  }
  const std::vector<double> grid = log_space(n_lo, n_hi, static_cast<std::size_t>(steps));
  BifurcationCurve curve{std::string(proc.name), std::vector<CurvePoint>(grid.size()), n_lo, n_hi};
  std::vector<std::exception_ptr> failures(grid.size());

  const auto solve_point = [&](std::size_t i) {
    try {
      const double n = grid[i];
      const double p = solve_p_n(proc, n);
      curve.points[i] = CurvePoint{n, p, curve_slope(proc, n, p), std::abs(proc.rate(n, p) - 1.0)};
    } catch (...) {
      failures[i] = std::current_exception();
    }
  };

  const auto count = static_cast<std::ptrdiff_t>(grid.size());
  if (exec.is_serial()) {
    for (std::ptrdiff_t i = 0; i < count; ++i) solve_point(static_cast<std::size_t>(i));
  } else {
#pragma omp parallel for schedule(static) num_threads(exec.threads())
    for (std::ptrdiff_t i = 0; i < count; ++i) solve_point(static_cast<std::size_t>(i));
  }

  for (const auto& failure : failures) {
    if (failure) std::rethrow_exception(failure);
  }
  return curve;
}

std::vector<StationaryPoint> solve_stationary_system(const ProcedureSpec& proc,
                                                     const EngineOptions& opts, Execution exec) {
  const BifurcationCurve curve =
      trace_curve(proc, proc.c + opts.c_offset, opts.n_max, opts.trace_steps, exec);
  return stationary_from_curve(proc, curve, opts);
}

double limit_at_c(const ProcedureSpec& proc, const EngineOptions& opts) {
  const double h = opts.c_offset;
  const double near = solve_p_n(proc, proc.c + h);
  const double far = solve_p_n(proc, proc.c + 2.0 * h);
  const double extrapolated = std::clamp(2.0 * near - far, 0.0, ucp());
  // When the continuous extension is defined at c itself, its root is the
  // limit; keep it only if it agrees with the one-sided extrapolation.
  try {
    const double at_c = solve_p_n(proc, proc.c);
    if (std::abs(at_c - extrapolated) <= 1e-9) return at_c;
  } catch (const std::exception&) {
  }
  return extrapolated;
}

double limit_at_infinity(const ProcedureSpec& proc, const EngineOptions& opts) {
  const double n[3] = {opts.n_max / 100.0, opts.n_max / 10.0, opts.n_max};
  double x[3];
  double y[3];
  for (int i = 0; i < 3; ++i) {
    x[i] = 1.0 / n[i];
    y[i] = solve_p_n(proc, n[i]);
  }
  // Lagrange interpolant through (x_i, y_i) evaluated at x = 0.
  double at_zero = 0.0;
  for (int i = 0; i < 3; ++i) {
    double w = 1.0;
    for (int j = 0; j < 3; ++j) {
      if (j != i) w *= (0.0 - x[j]) / (x[i] - x[j]);
    }
    at_zero += w * y[i];
  }
  return std::clamp(at_zero, 0.0, ucp());
}

CutPointResult classify_and_find_cocp(const ProcedureSpec& proc, const EngineOptions& opts,
                                      Execution exec) {
  const BifurcationCurve curve =
      trace_curve(proc, proc.c + opts.c_offset, opts.n_max, opts.trace_steps, exec);

  CutPointResult result;
  const auto [lo_it, hi_it] = std::ranges::minmax_element(curve.points, {}, &CurvePoint::p_n);
  result.curve_max = hi_it->p_n;
  result.curve_argmax_n = hi_it->n;
  result.limit_at_c = limit_at_c(proc, opts);
  result.limit_at_infinity = limit_at_infinity(proc, opts);

  if (hi_it->p_n - lo_it->p_n <= opts.flatness) {
    result.type = BifurcationType::b0;
    result.cocp = hi_it->p_n;
    result.n_star = hi_it->n;
    return result;
  }

  result.system_solutions = stationary_from_curve(proc, curve, opts);
  const double boundary_max =
      std::max({result.curve_max, result.limit_at_c, result.limit_at_infinity});
  if (!result.system_solutions.empty()) {
    const auto best = std::ranges::max_element(result.system_solutions, {}, &StationaryPoint::p);
    if (best->p >= boundary_max - opts.attain_tol && best->p < ucp()) {
      result.type = BifurcationType::b2;
      result.cocp = best->p;
      result.n_star = best->n;
      return result;
    }
  }

  result.type = BifurcationType::b1;
  result.cocp = std::min(ucp(), std::max(result.limit_at_c, result.limit_at_infinity));
  return result;
}

std::vector<double> scan_all_roots(const ProcedureSpec& proc, double n, double p_hi,
                                   int samples) {
  if (!(n > 0.0)) throw DomainError("scan_all_roots: n must be positive");
  if (!(p_hi > kPrevalenceFloor && p_hi < 1.0) || samples < 4) {
    throw DomainError("scan_all_roots: need 1e-12 < p_hi < 1 and samples >= 4");
  }
  const auto half = static_cast<std::size_t>(samples / 2);
  std::vector<double> grid = log_space(kPrevalenceFloor, p_hi, half);
  const std::vector<double> lin =
      linear_space(kPrevalenceFloor, p_hi, static_cast<std::size_t>(samples) - half);
  grid.insert(grid.end(), lin.begin(), lin.end());
  std::ranges::sort(grid);
  const auto dup = std::ranges::unique(grid);
  grid.erase(dup.begin(), dup.end());

  const auto excess = [&proc, n](double p) { return proc.rate(n, p) - 1.0; };
  return sign_change_roots(excess, grid);
}

std::vector<CurvePoint> trace_all_roots(const ProcedureSpec& proc, double n_lo, double n_hi,
                                        int steps, double p_hi, Execution exec) {
  if (!(n_lo > 0.0) || !(n_hi > n_lo) || steps < 2) {
    throw DomainError("trace_all_roots: need 0 < n_lo < n_hi and steps >= 2");
  }
  const std::vector<double> grid = log_space(n_lo, n_hi, static_cast<std::size_t>(steps));
  std::vector<std::vector<CurvePoint>> rows(grid.size());
  std::vector<std::exception_ptr> failures(grid.size());
  const auto scan_point = [&](std::size_t i) {
    try {
      const double n = grid[i];
      for (double p : scan_all_roots(proc, n, p_hi)) {
        rows[i].push_back(
            CurvePoint{n, p, curve_slope(proc, n, p), std::abs(proc.rate(n, p) - 1.0)});
      }
    } catch (...) {
      failures[i] = std::current_exception();
    }
  };
  const auto count = static_cast<std::ptrdiff_t>(grid.size());
  if (exec.is_serial()) {
    for (std::ptrdiff_t i = 0; i < count; ++i) scan_point(static_cast<std::size_t>(i));
  } else {
#pragma omp parallel for schedule(static) num_threads(exec.threads())
    for (std::ptrdiff_t i = 0; i < count; ++i) scan_point(static_cast<std::size_t>(i));
  }
  std::vector<CurvePoint> out;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (failures[i]) std::rethrow_exception(failures[i]);
    out.insert(out.end(), rows[i].begin(), rows[i].end());
  }
  return out;
}

}  // namespace cutpoint
