#pragma once

// Small scalar helpers: log-sum-exp, 1-D grids and golden-section search.

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <vector>

namespace renyi {

/// log sum_i exp(x_i); -inf for an empty or all -inf input.
inline double log_sum_exp(std::span<const double> xs) {
  double top = -std::numeric_limits<double>::infinity();
  for (double x : xs) top = std::max(top, x);
  if (!std::isfinite(top)) return top;
  double s = 0.0;
  for (double x : xs) s += std::exp(x - top);
  return top + std::log(s);
}

/// n points evenly spaced in log scale from lo to hi inclusive (lo, hi > 0).
inline std::vector<double> log_grid(double lo, double hi, int n) {
  std::vector<double> g(static_cast<std::size_t>(n));
  if (n == 1) {
    g[0] = lo;
    return g;
  }
  const double a = std::log(lo), b = std::log(hi);
  for (int i = 0; i < n; ++i) g[static_cast<std::size_t>(i)] = std::exp(a + (b - a) * i / (n - 1));
  g.front() = lo;
  g.back() = hi;
  return g;
}

struct ScalarMax {
  double arg;
  double value;
};

/// Golden-section search for the maximum of a unimodal f on [lo, hi].
template <class F>
ScalarMax golden_section_maximize(F&& f, double lo, double hi, double tol) {
  constexpr double inv_phi = 0.6180339887498949;
  double a = lo, b = hi;
  double x1 = b - inv_phi * (b - a), x2 = a + inv_phi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  while (b - a > tol) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = f(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = f(x1);
    }
  }
  return f1 >= f2 ? ScalarMax{x1, f1} : ScalarMax{x2, f2};
}

/// Maximum of f over a sorted grid, refined by golden section between the
/// neighbours of the best grid point. Endpoints of the grid stay candidates.
template <class F>
ScalarMax grid_then_golden_maximize(F&& f, std::span<const double> grid, double tol) {
  std::vector<double> vals(grid.size());
  std::size_t best = 0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    vals[i] = f(grid[i]);
    if (vals[i] > vals[best]) best = i;
  }
  ScalarMax out{grid[best], vals[best]};
  if (grid.size() < 3) return out;
  const double lo = grid[best == 0 ? 0 : best - 1];
  const double hi = grid[std::min(best + 1, grid.size() - 1)];
  const ScalarMax refined = golden_section_maximize(f, lo, hi, tol);
  if (refined.value > out.value) out = refined;
  return out;
}

}  // namespace renyi
