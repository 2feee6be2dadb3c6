#pragma once

#include <cmath>
#include <utility>

namespace relaycap {

struct ScalarSearchResult {
  double x{0.0};
  double fx{0.0};
};

// Golden-section minimization of a unimodal f on [a, b], stopping when the
// bracket is narrower than x_tol.
template <typename F>
ScalarSearchResult golden_section_min(F&& f, double a, double b, double x_tol,
                                      int max_iter = 400) {
  constexpr double inv_phi = 0.6180339887498949;
  double c = b - (b - a) * inv_phi;
  double d = a + (b - a) * inv_phi;
  double fc = f(c);
  double fd = f(d);
  for (int i = 0; i < max_iter && (b - a) > x_tol; ++i) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - (b - a) * inv_phi;
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + (b - a) * inv_phi;
      fd = f(d);
    }
  }
  const double x = 0.5 * (a + b);
  return {x, f(x)};
}

template <typename F>
ScalarSearchResult golden_section_max(F&& f, double a, double b, double x_tol,
                                      int max_iter = 400) {
  auto r = golden_section_min([&f](double x) { return -f(x); }, a, b, x_tol, max_iter);
  return {r.x, -r.fx};
}

// Bisection for the sign change of a nondecreasing g with g(lo) <= 0 <= g(hi).
template <typename G>
double bisect_root(G&& g, double lo, double hi, double x_tol, int max_iter = 400) {
  for (int i = 0; i < max_iter && (hi - lo) > x_tol; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (g(mid) <= 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace relaycap
