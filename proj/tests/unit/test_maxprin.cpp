#include <cmath>

#include "doctest.h"
#include "pclab/maxprin.hpp"
#include "pclab/rng.hpp"

using namespace pclab;

namespace {
constexpr double kPi = 3.14159265358979323846;

BoxDomain box1(int n = 128) {
  BoxDomain d;
  d.dims = 1;
  d.lengths = {kPi, 1.0, 1.0};
  d.grid_points = {n, 4, 4};
  return d;
}

BetaProfile rising_beta(double T) {
  return BetaProfile({0.0, 0.4 * T, T}, {0.6, 0.9, 1.8}, T);
}
}  // namespace

TEST_CASE("negative data stays negative under an admissible weight") {
  SupersolutionSpec w;
  w.w0 = zero_field(box1(), {32, 1, 1});
  w.w0.coeffs[0] = 1.0;
  w.g.kind = SourceSpec::Kind::eigenmode;
  w.g.mode = {1, 1, 1};
  w.g.amplitude = 1.0;  // keeps w a supersolution with nonnegative source
  SpectralField z0 = zero_field(box1(), {32, 1, 1});
  z0.coeffs[0] = -1.0;

  const MaxPrincipleResult r =
      max_principle_experiment(rising_beta(1.0), w, z0, TimeGrid{1.0, 256});
  CHECK(r.scale > 0.0);
  CHECK(r.max_nodal_z_T <= 1e-8 * r.scale);
}

TEST_CASE("scale combines the data size and the drive size") {
  SupersolutionSpec w;
  w.w0 = zero_field(box1(), {8, 1, 1});
  w.w0.coeffs[0] = 2.0;
  SpectralField z0 = zero_field(box1(), {8, 1, 1});
  z0.coeffs[0] = -0.25;
  const MaxPrincipleResult r =
      max_principle_experiment(rising_beta(0.5), w, z0, TimeGrid{0.5, 128});
  // |z0|_inf = 0.25; max |beta'| ~ several, |w|_inf ~ 2 => drive term dominates.
  CHECK(r.scale > 0.25);
}

TEST_CASE("inadmissible inputs are rejected with named violations") {
  SupersolutionSpec w;
  w.w0 = zero_field(box1(), {8, 1, 1});
  w.w0.coeffs[0] = 1.0;
  SpectralField z0 = zero_field(box1(), {8, 1, 1});
  z0.coeffs[0] = -1.0;
  const TimeGrid grid{1.0, 64};

  const BetaProfile dips({0.0, 0.5, 1.0}, {1.0, -0.4, 1.2}, 1.0);
  CHECK_THROWS_AS(max_principle_experiment(dips, w, z0, grid), PreconditionError);
  try {
    max_principle_experiment(dips, w, z0, grid);
  } catch (const PreconditionError& e) {
    REQUIRE(!e.violations.empty());
    CHECK(e.violations.front() == "beta must be positive on [0, T]");
  }

  SupersolutionSpec w_bad = w;
  w_bad.w0.coeffs[0] = -1.0;
  try {
    max_principle_experiment(rising_beta(1.0), w_bad, z0, grid);
    CHECK(false);
  } catch (const PreconditionError& e) {
    REQUIRE(!e.violations.empty());
    CHECK(e.violations.front() == "w0 must be nonnegative");
  }

  SpectralField z_bad = z0;
  z_bad.coeffs[0] = 0.5;
  try {
    max_principle_experiment(rising_beta(1.0), w, z_bad, grid);
    CHECK(false);
  } catch (const PreconditionError& e) {
    REQUIRE(!e.violations.empty());
    CHECK(e.violations.front() == "z0 must be nonpositive");
  }
}

TEST_CASE("randomized suite cases all satisfy the sign bound") {
  const SuiteResult s = max_principle_suite(8, 3, Rng::mix(7, 3001));
  REQUIRE(s.cases.size() == 11);
  CHECK(s.worst_ratio <= 1e-8);
  for (const auto& c : s.cases) {
    CHECK(c.scale > 0.0);
    CHECK(c.ratio <= 1e-8);
    CHECK(c.ladder_agreement < 1e-3);
  }
}
