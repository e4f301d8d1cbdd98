// SPDX-License-Identifier: Apache-2.0
#include <cmath>

#include "doctest.h"
#include "evrg/mc.hpp"
#include "evrg/rescaling.hpp"
#include "test_common.hpp"

using namespace evrg;
using evrg::testing::linspace;

namespace {

std::vector<double> interior_grid(Case c, int count) {
  switch (c) {
    case Case::zero: return linspace(-6.0, 6.0, count);
    case Case::one_minus: return linspace(-8.0, -1e-3, count);
    case Case::one_plus: return linspace(1e-3, 8.0, count);
    case Case::two: return linspace(1e-3, 1.0 - 1e-3, count);
  }
  return {};
}

const Case all_cases[] = {Case::zero, Case::one_minus, Case::one_plus, Case::two};

}  // namespace

TEST_CASE("closed-form map values") {
  CHECK(rescale(RescalingGroup(Case::two, 2.0), std::log(4.0), 0.25) ==
        doctest::Approx(0.5).epsilon(1e-15));
  CHECK(rescale(RescalingGroup(Case::zero, 2.0), 3.0, 1.0) ==
        doctest::Approx(2.5).epsilon(1e-15));
  for (Case c : all_cases) {
    const RescalingGroup g(c, 1.7);
    for (double x : interior_grid(c, 17))
      CHECK(rescale(g, 0.0, x) == doctest::Approx(x).epsilon(1e-15));
  }
}

TEST_CASE("map domain errors") {
  const RescalingGroup g(Case::two, 1.0);
  CHECK_THROWS_AS(rescale(g, 1.0, 1.5), Error);
  CHECK_THROWS_AS(rescale(g, 1.0, -0.1), Error);
  CHECK_THROWS_AS(generator(g, 2.0), Error);
  CHECK_THROWS_AS(RescalingGroup(Case::two, 0.0), Error);
}

TEST_CASE("generator closed forms and boundary zeros") {
  CHECK(generator(RescalingGroup(Case::two, 1.0), std::exp(-1.0)) ==
        doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
  for (double alpha : {0.5, 1.0, 2.0}) {
    const RescalingGroup g(Case::two, alpha);
    CHECK(generator(g, 0.0) == 0.0);
    CHECK(generator(g, 1.0) == 0.0);
    CHECK(generator(RescalingGroup(Case::zero, alpha), 0.3) ==
          doctest::Approx(1.0 / alpha));
    CHECK(generator(RescalingGroup(Case::one_minus, alpha), -2.0) ==
          doctest::Approx(2.0 / alpha));
    CHECK(generator(RescalingGroup(Case::one_plus, alpha), 2.0) ==
          doctest::Approx(2.0 / alpha));
  }
}

TEST_CASE("generator matches the flow derivative (Richardson oracle)") {
  for (Case c : all_cases) {
    const RescalingGroup g(c, 2.0);
    for (double x : interior_grid(c, 9)) {
      // (g_h(x) - g_-h(x)) / 2h extrapolated over halvings
      double estimates[3];
      double h = 1e-2;
      for (int k = 0; k < 3; ++k, h *= 0.5)
        estimates[k] = (rescale(g, h, x) - rescale(g, -h, x)) / (2 * h);
      const double d1 = estimates[1] + (estimates[1] - estimates[0]) / 3.0;
      const double d2 = estimates[2] + (estimates[2] - estimates[1]) / 3.0;
      const double extrapolated = d2 + (d2 - d1) / 15.0;
      CHECK(extrapolated == doctest::Approx(generator(g, x)).epsilon(1e-8));
    }
  }
}

TEST_CASE("group law on grids, with inverse pairs") {
  for (Case c : all_cases) {
    CAPTURE(case_name(c));
    for (double alpha : {0.5, 1.0, 2.0}) {
      const RescalingGroup g(c, alpha);
      const auto grid = interior_grid(c, 100);
      CHECK(check_group_law(g, 0.7, 1.3, grid) <= 1e-12);
      CHECK(check_group_law(g, -0.9, 2.2, grid) <= 1e-12);
      CHECK(check_group_law(g, 1.7, -1.7, grid) <= 1e-13);  // inverse element
    }
  }
  // translations compose exactly
  CHECK(check_group_law(RescalingGroup(Case::zero, 1.0), 0.37, 1.21,
                        interior_grid(Case::zero, 100)) <= 1e-14);
}

TEST_CASE("support preservation and monotonicity") {
  Rng rng(99);
  for (Case c : all_cases) {
    const RescalingGroup g(c, 1.3);
    const Support sup = canonical_support(c);
    const auto grid = interior_grid(c, 250);
    for (int i = 0; i < 1000; ++i) {
      const double s = (rng.uniform01() - 0.5) * 8.0;
      const double x = grid[static_cast<size_t>(rng.uniform01() * (grid.size() - 1))];
      CHECK(sup.contains(rescale(g, s, x)));
    }
    for (double s : {-2.0, 0.4, 3.0}) {
      double prev = rescale(g, s, grid.front());
      int violations = 0;
      for (size_t i = 1; i < grid.size(); ++i) {
        const double cur = rescale(g, s, grid[i]);
        if (!(cur > prev)) ++violations;
        prev = cur;
      }
      CHECK(violations == 0);
    }
  }
}

TEST_CASE("interior points move up under positive flow") {
  for (Case c : all_cases) {
    const RescalingGroup g(c, 0.8);
    for (double x : interior_grid(c, 33)) {
      CHECK(rescale(g, 1.2, x) > x);
      CHECK(generator(g, x) > 0.0);
    }
  }
}

TEST_CASE("flow equation d/ds g_s = f(g_s)") {
  for (Case c : all_cases) {
    const RescalingGroup g(c, 2.0);
    for (double s : {0.0, 1.0, 2.0}) {
      for (double x : interior_grid(c, 11)) {
        const double h = 1e-6;
        const double lhs = (rescale(g, s + h, x) - rescale(g, s - h, x)) / (2 * h);
        CHECK(lhs == doctest::Approx(generator(g, rescale(g, s, x))).epsilon(1e-8));
      }
    }
  }
}

TEST_CASE("group ids") {
  const RescalingGroup g = make_group("case2:alpha=2");
  CHECK(g.kind == Case::two);
  CHECK(g.alpha == 2.0);
  CHECK(make_group("case1-:alpha=0.5").kind == Case::one_minus);
  CHECK_THROWS_AS(make_group("case2"), Error);
  CHECK_THROWS_AS(make_group("case2:beta=2"), Error);
  CHECK_THROWS_AS(make_group("case5:alpha=2"), Error);
  CHECK(group_id(g) == "case2:alpha=2");
}
