#include <cmath>

#include "doctest.h"
#include "pclab/beta.hpp"
#include "pclab/spline.hpp"

using namespace pclab;

TEST_CASE("natural cubic spline interpolates its knots") {
  const std::vector<double> ts = {0.0, 0.4, 1.1, 2.0, 3.0};
  const std::vector<double> ys = {1.0, 0.2, -0.5, 0.7, 2.0};
  const CubicSpline s(ts, ys);
  for (size_t i = 0; i < ts.size(); ++i)
    CHECK(s.value(ts[i]) == doctest::Approx(ys[i]).epsilon(1e-13));
}

TEST_CASE("spline derivative matches a centered difference") {
  const std::vector<double> ts = {0.0, 0.5, 1.0, 1.5, 2.0};
  const std::vector<double> ys = {0.0, 0.9, 0.3, 1.2, 0.8};
  const CubicSpline s(ts, ys);
  const double h = 1e-6;
  for (double t : {0.21, 0.77, 1.33, 1.9}) {
    const double fd = (s.value(t + h) - s.value(t - h)) / (2.0 * h);
    CHECK(s.derivative(t) == doctest::Approx(fd).epsilon(1e-6));
  }
}

TEST_CASE("spline reproduces straight lines exactly") {
  const std::vector<double> ts = {0.0, 1.0, 2.5, 4.0};
  std::vector<double> ys;
  for (double t : ts) ys.push_back(3.0 - 0.5 * t);
  const CubicSpline s(ts, ys);
  CHECK(s.value(1.7) == doctest::Approx(3.0 - 0.85).epsilon(1e-13));
  CHECK(s.derivative(3.2) == doctest::Approx(-0.5).epsilon(1e-12));
}

TEST_CASE("weight admissibility failures are reported by name") {
  // Dips negative mid-interval.
  const BetaProfile dip({0.0, 0.5, 1.0}, {1.0, -0.3, 1.5}, 1.0);
  auto bad = dip.violations();
  REQUIRE(!bad.empty());
  CHECK(bad.front() == "beta must be positive on [0, T]");

  // Positive but peaks in the interior rather than at the horizon.
  const BetaProfile hump({0.0, 0.5, 1.0}, {0.5, 2.0, 0.6}, 1.0);
  bad = hump.violations();
  REQUIRE(!bad.empty());
  CHECK(bad.front() == "beta must attain its maximum at t = T");

  // Monotone rise is admissible.
  const BetaProfile rise({0.0, 0.5, 1.0}, {0.5, 0.8, 1.5}, 1.0);
  CHECK(rise.violations().empty());
}
