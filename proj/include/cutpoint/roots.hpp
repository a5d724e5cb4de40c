#pragma once

// Scalar bracketing helpers shared by the engine and the assumption audit.

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace cutpoint {

/// count points geometrically spaced on [lo, hi], endpoints exact.
inline std::vector<double> log_space(double lo, double hi, std::size_t count) {
  if (count < 2 || !(lo > 0.0) || !(hi > lo)) {
    throw std::invalid_argument("log_space: need count >= 2 and 0 < lo < hi");
  }
  std::vector<double> out(count);
  const double step = std::log(hi / lo) / static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i) out[i] = lo * std::exp(step * static_cast<double>(i));
  out.front() = lo;
  out.back() = hi;
  return out;
}

inline std::vector<double> linear_space(double lo, double hi, std::size_t count) {
  if (count < 2 || !(hi > lo)) {
    throw std::invalid_argument("linear_space: need count >= 2 and lo < hi");
  }
  std::vector<double> out(count);
  const double step = (hi - lo) / static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i) out[i] = lo + step * static_cast<double>(i);
  out.back() = hi;
  return out;
}

/// Bisection on a sign-changing bracket, run until the midpoint no longer
/// separates the endpoints (full double resolution) or f vanishes.
template <class F>
double bisect(F&& f, double lo, double hi, double f_lo) {
  for (int iter = 0; iter < 256; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (!(mid > lo && mid < hi)) break;
    const double f_mid = f(mid);
    if (f_mid == 0.0) return mid;
    if ((f_mid < 0.0) == (f_lo < 0.0)) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

/// Every root of f visible as a sign change (or exact zero) on the grid,
/// each refined by bisection. The result size equals the number of sign
/// changes plus exact zeros observed on the grid.
template <class F>
std::vector<double> sign_change_roots(F&& f, std::span<const double> grid) {
  std::vector<double> roots;
  if (grid.empty()) return roots;
  std::vector<double> values(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) values[i] = f(grid[i]);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (values[i] == 0.0) {
      roots.push_back(grid[i]);
      continue;
    }
    if (i + 1 < grid.size() && values[i + 1] != 0.0 && std::isfinite(values[i]) &&
        std::isfinite(values[i + 1]) && ((values[i] < 0.0) != (values[i + 1] < 0.0))) {
      roots.push_back(bisect(f, grid[i], grid[i + 1], values[i]));
    }
  }
  return roots;
}

}  // namespace cutpoint
