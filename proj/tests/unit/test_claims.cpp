#include <cmath>

#include "doctest.h"
#include "pclab/claims.hpp"
#include "pclab/evolve.hpp"
#include "pclab/field.hpp"
#include "pclab/source.hpp"

using namespace pclab;

namespace {
constexpr double kPi = 3.14159265358979323846;

BoxDomain box1(int n = 256) {
  BoxDomain d;
  d.dims = 1;
  d.lengths = {kPi, 1.0, 1.0};
  d.grid_points = {n, 4, 4};
  return d;
}

SpectralField mode1(double amp = 1.0, int cap = 64) {
  SpectralField f = zero_field(box1(), {cap, 1, 1});
  f.coeffs[0] = amp;
  return f;
}

SourceSpec const_source(double v) {
  SourceSpec u;
  u.kind = SourceSpec::Kind::constant;
  u.value = v;
  return u;
}
}  // namespace

TEST_CASE("proportionality residual vanishes iff the fields are parallel") {
  SpectralField y = mode1(2.0, 8);
  SpectralField phi = mode1(0.3, 8);
  CHECK(proportionality_residual(y, phi) < 1e-15);
  phi.coeffs[2] = 0.1;
  CHECK(proportionality_residual(y, phi) > 1e-3);
}

TEST_CASE("single-mode source aligned with single-mode data keeps r at zero") {
  SourceSpec u;
  u.kind = SourceSpec::Kind::eigenmode;
  u.mode = {1, 1, 1};
  u.amplitude = 1.0;
  const ProportionalityResult pr = proportionality_run(mode1(), u, TimeGrid{1.0, 128});
  double worst = 0.0;
  for (double r : pr.r) worst = std::max(worst, r);
  CHECK(worst <= 1e-12);
}

TEST_CASE("constant source against sine data gives the frozen r(1)") {
  const ProportionalityResult pr =
      proportionality_run(mode1(), const_source(1.0), TimeGrid{1.0, 256});
  CHECK(pr.r.back() == doctest::Approx(0.041269869809572).epsilon(1e-6));
  CHECK(pr.r.front() == 0.0);  // identical fields at t = 0
}

TEST_CASE("lambda decomposition reproduces frozen values for the shifted split") {
  // u = 0 with shift c = 1: lambda_i(1) depend only on the heat flow and the
  // constant-source response.
  SourceSpec u;  // zero
  const LambdaTrajectory lt = decompose_lambda(mode1(), u, 1.0, TimeGrid{1.0, 256});
  CHECK(lt.lambda1.back() == doctest::Approx(2.0949264889723995).epsilon(1e-9));
  CHECK(lt.lambda2.back() == doctest::Approx(3.190501407428792).epsilon(1e-9));
  CHECK(lt.linearity_residual < 1e-12);
  CHECK(lt.min_lambda >= 1.0 - 1e-12);
  CHECK(lt.lambda1.front() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("lambda decomposition is exact-linear for a genuinely signed source") {
  SourceSpec u;
  u.kind = SourceSpec::Kind::spectral;
  u.band = {4, 1, 1};
  u.coeffs = {0.7, -0.4, 0.2, -0.1};  // changes sign on the interval
  const LambdaTrajectory lt = decompose_lambda(mode1(), u, 0.5, TimeGrid{1.0, 128});
  CHECK(lt.linearity_residual < 1e-12);
  CHECK(lt.min_lambda >= 1.0 - 1e-12);
  for (double v : lt.recon_residual) CHECK(v < 1.0);
}

TEST_CASE("sign-changing data still splits into nonnegative halves") {
  SpectralField y0 = zero_field(box1(), {8, 1, 1});
  y0.coeffs[1] = 1.0;  // sin(2x) changes sign
  const LambdaTrajectory lt = decompose_lambda(y0, const_source(1.0), 1.0, TimeGrid{1.0, 32});
  CHECK(lt.min_lambda >= 1.0 - 1e-12);
  CHECK(lt.linearity_residual < 1e-10);
}

TEST_CASE("identically zero data cannot be decomposed") {
  const SpectralField y0 = zero_field(box1(), {8, 1, 1});
  CHECK_THROWS_AS(decompose_lambda(y0, const_source(1.0), 1.0, TimeGrid{1.0, 32}),
                  std::domain_error);
}

TEST_CASE("squared heat flow dominates the squared free flow") {
  const L4Margins m = l4_comparison(mode1(), TimeGrid{1.0, 64});
  CHECK(m.min_pointwise >= -1e-9 * m.pointwise_scale);
  CHECK(m.min_norm >= -1e-9 * m.norm_scale);
  REQUIRE(!m.norm_margin.empty());
  CHECK(m.norm_margin.back() > 0.0);  // strict domination away from t = 0
}

TEST_CASE("mollification levels converge and repeating a level is idempotent") {
  SourceSpec u;
  u.kind = SourceSpec::Kind::spectral_decay;
  u.band = {32, 1, 1};
  u.amplitude = 1.0;
  u.exponent = 1.0;
  const BoxDomain d = box1(128);
  SpectralField y0 = zero_field(d, {32, 1, 1});
  y0.coeffs[0] = 1.0;

  const MollificationResult r =
      source_mollification_study(u, {4, 8, 16, 32}, y0, 1.0, TimeGrid{1.0, 96});
  REQUIRE(r.levels.size() == 4);
  for (size_t i = 2; i < r.levels.size(); ++i)
    CHECK(r.levels[i].dist_prev <= r.levels[i - 1].dist_prev + 1e-15);

  // Truncation past the source band is a no-op, so the level-64 run must
  // reproduce the level-32 trajectory exactly.
  const MollificationResult twice =
      source_mollification_study(u, {32, 64}, y0, 1.0, TimeGrid{1.0, 96});
  CHECK(twice.levels.back().dist_prev < 1e-14);
  CHECK(twice.levels.back().lambda_diff_prev < 1e-14);

  CHECK_THROWS_AS(source_mollification_study(u, {32, 32}, y0, 1.0, TimeGrid{1.0, 96}),
                  std::invalid_argument);
}
