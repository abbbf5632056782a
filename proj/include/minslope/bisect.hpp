#pragma once

#include <algorithm>
#include <cmath>
#include <utility>

#include "errors.hpp"

namespace minslope {

struct Bracket {
  double lo;
  double hi;
  double mid() const { return 0.5 * (lo + hi); }
  double width() const { return hi - lo; }
};

// Shrinks [lo, hi] around the point where `left` flips from true to false.
// Requires left(lo) and !left(hi); stops at relative width rel_tol.
template <typename Pred>
Bracket bisect_flip(Pred&& left, double lo, double hi, double rel_tol = 1e-14, int max_iter = 400) {
  if (!(lo < hi)) throw RootError("empty bracket");
  for (int it = 0; it < max_iter; ++it) {
    double scale = std::max({std::fabs(lo), std::fabs(hi), 1e-300});
    if (hi - lo <= rel_tol * scale) break;
    double m = 0.5 * (lo + hi);
    if (m <= lo || m >= hi) break;
    if (left(m))
      lo = m;
    else
      hi = m;
  }
  return {lo, hi};
}

// Root of f on [lo, hi] with f(lo) > 0 > f(hi).
template <typename F>
Bracket bisect_decreasing(F&& f, double lo, double hi, double rel_tol = 1e-14, int max_iter = 400) {
  double flo = f(lo), fhi = f(hi);
  if (!(flo > 0) || !(fhi < 0)) throw RootError("function does not change sign on the bracket");
  return bisect_flip([&](double x) { return f(x) > 0; }, lo, hi, rel_tol, max_iter);
}

}  // namespace minslope
