#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "wpcn/errors.hpp"
#include "wpcn/noma.hpp"
#include "wpcn/root_finding.hpp"

using namespace wpcn;

TEST_CASE("solve_increasing inverts a linear function") {
  const auto r = solve_increasing([](double x) { return 2.0 * x; }, 10.0, 1e-14);
  CHECK(r.root == doctest::Approx(5.0).epsilon(1e-12));
  CHECK(r.iterations > 0);
}

TEST_CASE("solve_increasing returns the boundary when already satisfied") {
  const auto r = solve_increasing([](double x) { return x + 1.0; }, 0.5, 1e-12);
  CHECK(r.root == 0.0);
  CHECK(r.iterations == 0);
}

TEST_CASE("solve_increasing reports unreachable targets") {
  // Bounded above by 1: target 2 can never bracket.
  CHECK_THROWS_AS(
      solve_increasing([](double x) { return x / (1.0 + x); }, 2.0, 1e-12),
      SolverError);
}

TEST_CASE("solve_increasing handles steep and shallow functions") {
  const auto steep = solve_increasing([](double x) { return 1e9 * x; }, 3.0, 1e-14);
  CHECK(steep.root == doctest::Approx(3e-9).epsilon(1e-10));
  const auto shallow = solve_increasing([](double x) { return 1e-9 * x; }, 3.0, 1e-14);
  CHECK(shallow.root == doctest::Approx(3e9).epsilon(1e-10));
}

TEST_CASE("depletion root matches the frozen reference at a=3") {
  // Solves (1+y)*ln(1+y) = y + a.
  const double y = depletion_root(3.0, 1e-14);
  CHECK(y == doctest::Approx(3.319136566291447).epsilon(1e-12));
  const double lhs = (1.0 + y) * std::log1p(y);
  CHECK(lhs == doctest::Approx(y + 3.0).epsilon(1e-12));
}

TEST_CASE("depletion root edge cases") {
  CHECK(depletion_root(0.0) == 0.0);
  CHECK_THROWS_AS(depletion_root(-1.0), std::domain_error);
  // Strictly increasing in a.
  double prev = 0.0;
  for (double a : {0.1, 0.5, 1.0, 2.0, 5.0, 20.0, 100.0}) {
    const double y = depletion_root(a, 1e-13);
    CHECK(y > prev);
    CHECK((1.0 + y) * std::log1p(y) == doctest::Approx(y + a).epsilon(1e-10));
    prev = y;
  }
}

TEST_CASE("iteration counter accumulates") {
  int iters = 0;
  depletion_root(3.0, 1e-13, &iters);
  CHECK(iters > 10);
  const int first = iters;
  depletion_root(5.0, 1e-13, &iters);
  CHECK(iters > first);  // accumulates rather than resets
}
