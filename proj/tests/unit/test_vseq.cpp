#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "pclab/vseq.hpp"

using namespace pclab;

namespace {

BoxDomain box1(int n = 128) {
  BoxDomain d;
  d.dims = 1;
  d.lengths = {M_PI, 1.0, 1.0};
  d.grid_points = {n, 4, 4};
  return d;
}

SourceSpec unit_source() {
  SourceSpec u;
  u.kind = SourceSpec::Kind::constant;
  u.value = 1.0;
  u.has_bounds = true;
  u.bound_c = 1.0;
  u.bound_M = 1.0;
  return u;
}

VSeqConfig feasible_config(int iterations) {
  VSeqConfig cfg;
  cfg.domain = box1(128);
  cfg.mode_cap = {32, 1, 1};
  cfg.grid = TimeGrid{4.5, 256};
  cfg.y0 = zero_field(cfg.domain, cfg.mode_cap);
  cfg.y0.coeffs[0] = 1.0;
  cfg.u = unit_source();
  cfg.eps = 0.10;
  cfg.omega_frac = {0.35, 0.65};
  cfg.window_frac = {0.38, 0.41};
  cfg.iterations = iterations;
  return cfg;
}

}  // namespace

TEST_CASE("a long horizon with a narrow window admits the full iteration") {
  const VSeqResult r = v_sequence_run(feasible_config(2));
  REQUIRE(r.iterations.size() == 2);
  CHECK(r.accepted_count == 2);
  CHECK(r.exhaustion.empty());
  CHECK(r.y_T_norm > 0.0);
  for (const VSeqIteration& it : r.iterations) {
    CHECK(it.accepted);
    CHECK(it.rejection.empty());
    // The defect s_k must come out nonpositive (up to roundoff) for the
    // comparison argument to close.
    CHECK(it.s_k <= 1e-6);
    // v_k >= v_{k-1} nodally; the first step has no predecessor.
    if (it.k > 1) CHECK(it.mono_min >= -1e-10);
    // On omega x I the sequence stays pinned at eps * u.
    CHECK(it.pin_error <= 1e-12);
    CHECK(it.beta_drop > 0.0);
    CHECK(it.beta_rise > 0.0);
  }
}

TEST_CASE("iterates stay between eps u and the declared source ceiling") {
  const VSeqResult r = v_sequence_run(feasible_config(2));
  CHECK(r.v_min >= 0.10 - 1e-12);
  CHECK(r.v_max <= r.u_max + 1e-12);
  CHECK(r.u_max == doctest::Approx(1.0));
}

TEST_CASE("a short horizon with a wide window exhausts the weight family") {
  VSeqConfig cfg = feasible_config(10);
  cfg.grid = TimeGrid{1.0, 256};
  cfg.eps = 0.5;
  cfg.omega_frac = {0.25, 0.75};
  cfg.window_frac = {0.25, 0.75};
  const VSeqResult r = v_sequence_run(cfg);
  CHECK(r.accepted_count == 0);
  CHECK(r.exhaustion == std::string("global_derivative_bound"));
  REQUIRE(!r.iterations.empty());
  CHECK(!r.iterations.front().accepted);
}

TEST_CASE("configuration errors are reported as invalid_argument") {
  VSeqConfig cfg = feasible_config(1);

  SUBCASE("2-D domain") {
    cfg.domain.dims = 2;
    cfg.domain.grid_points = {32, 32, 4};
    cfg.mode_cap = {8, 8, 1};
    cfg.y0 = zero_field(cfg.domain, cfg.mode_cap);
    cfg.y0.coeffs[0] = 1.0;
    CHECK_THROWS_AS(v_sequence_run(cfg), std::invalid_argument);
  }
  SUBCASE("missing source bounds") {
    cfg.u.has_bounds = false;
    CHECK_THROWS_AS(v_sequence_run(cfg), std::invalid_argument);
  }
  SUBCASE("time-varying source") {
    cfg.u.kind = SourceSpec::Kind::eigenmode;
    cfg.u.profile.kind = TimeProfile::Kind::ramp;
    cfg.u.profile.slope = 0.5;
    CHECK_THROWS_AS(v_sequence_run(cfg), std::invalid_argument);
  }
  SUBCASE("eps outside (0, 1)") {
    cfg.eps = 1.0;
    CHECK_THROWS_AS(v_sequence_run(cfg), std::invalid_argument);
  }
}
