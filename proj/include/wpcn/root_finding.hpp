#pragma once

#include "wpcn/errors.hpp"

namespace wpcn {

// Shared scalar kernel used by every solver in the library: find the root of a strictly
// increasing function, bracketing by doubling and bisecting to a relative width.
inline constexpr int kMaxDoublings = 128;
inline constexpr int kMaxBisections = 200;

struct RootResult {
  double root = 0.0;
  int iterations = 0;  // doublings + bisection steps
};

// Solves f(y) = target for strictly increasing f on [0, inf). Requires f(0) <= target
// (returns y = 0 immediately when f(0) >= target, the degenerate boundary root). The
// bracket starts at [0, 1] and the upper end doubles until f crosses the target; bisection
// then runs until hi - lo <= tol * hi.
template <class F>
RootResult solve_increasing(F&& f, double target, double tol) {
  double lo = 0.0;
  if (f(lo) >= target) return {0.0, 0};
  double hi = 1.0;
  int iterations = 0;
  while (f(hi) < target) {
    lo = hi;
    hi *= 2.0;
    if (++iterations > kMaxDoublings) {
      throw SolverError("root bracket doubling exhausted", lo, hi);
    }
  }
  for (int i = 0; i < kMaxBisections && hi - lo > tol * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (f(mid) < target) {
      lo = mid;
    } else {
      hi = mid;
    }
    ++iterations;
  }
  if (hi - lo > tol * hi) {
    throw SolverError("bisection did not reach requested tolerance", lo, hi);
  }
  return {0.5 * (lo + hi), iterations};
}

}  // namespace wpcn
