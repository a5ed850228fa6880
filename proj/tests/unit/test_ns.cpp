#include <cmath>
#include <complex>

#include "doctest.h"
#include "pclab/ns.hpp"

using namespace pclab;
using namespace pclab::ns;

namespace {

// u = (0, sin x): single-mode, divergence-free.
DivFreeField sine_x_e2(const PeriodicBox& box) {
  DivFreeField f = zero_velocity(box);
  const long lat = box.lattice();
  f.coeffs[lat + flat_index(box, {1, 0, 0})] = cplx(0.0, -0.5);
  f.coeffs[lat + flat_index(box, {-1, 0, 0})] = cplx(0.0, 0.5);
  return f;
}

}  // namespace

TEST_CASE("trilinear form reproduces the closed-form triad value") {
  PeriodicBox b2;
  b2.dims = 2;
  b2.K = 2;
  const long lat = b2.lattice();

  // u = (0, sin x), v = (sin y, 0), w = sin(x+y) (1,-1)/sqrt(2).
  DivFreeField u = sine_x_e2(b2);
  DivFreeField v = zero_velocity(b2);
  v.coeffs[flat_index(b2, {0, 1, 0})] = cplx(0.0, -0.5);
  v.coeffs[flat_index(b2, {0, -1, 0})] = cplx(0.0, 0.5);
  const double r = 1.0 / std::sqrt(2.0);
  DivFreeField w = zero_velocity(b2);
  w.coeffs[flat_index(b2, {1, 1, 0})] = cplx(0.0, -0.5 * r);
  w.coeffs[flat_index(b2, {-1, -1, 0})] = cplx(0.0, 0.5 * r);
  w.coeffs[lat + flat_index(b2, {1, 1, 0})] = cplx(0.0, 0.5 * r);
  w.coeffs[lat + flat_index(b2, {-1, -1, 0})] = cplx(0.0, -0.5 * r);

  CHECK(trilinear_b(u, v, w) == doctest::Approx(6.9788641996388785).epsilon(1e-13));

  // The quarter-period shift w -> cos(x+y)(1,-1)/sqrt(2) kills the integral.
  DivFreeField wc = zero_velocity(b2);
  wc.coeffs[flat_index(b2, {1, 1, 0})] = cplx(0.5 * r, 0.0);
  wc.coeffs[flat_index(b2, {-1, -1, 0})] = cplx(0.5 * r, 0.0);
  wc.coeffs[lat + flat_index(b2, {1, 1, 0})] = cplx(-0.5 * r, 0.0);
  wc.coeffs[lat + flat_index(b2, {-1, -1, 0})] = cplx(-0.5 * r, 0.0);
  CHECK(std::abs(trilinear_b(u, v, wc)) < 1e-12);
}

TEST_CASE("trilinear form is skew in its last two arguments") {
  PeriodicBox b3;
  b3.dims = 3;
  b3.K = 3;
  Rng rng(42);
  for (int trial = 0; trial < 3; ++trial) {
    const DivFreeField u = random_field(b3, rng);
    const DivFreeField v = random_field(b3, rng);
    const DivFreeField w = random_field(b3, rng);
    CHECK(std::abs(trilinear_b(u, v, v)) < 1e-13);
    CHECK(std::abs(trilinear_b(u, v, w) + trilinear_b(u, w, v)) < 1e-13);
  }
}

TEST_CASE("random fields are hermitian, divergence-free, and unit-normalized") {
  PeriodicBox b3;
  b3.dims = 3;
  b3.K = 4;
  Rng rng(7);
  const DivFreeField f = random_field(b3, rng);
  const long lat = b3.lattice();
  double worst = 0.0;
  for (long i = 0; i < lat; ++i) {
    std::array<int, 3> k = wavevector(b3, i);
    const std::array<int, 3> mk{-k[0], -k[1], -k[2]};
    const long j = flat_index(b3, mk);
    for (int c = 0; c < 3; ++c)
      worst = std::max(worst,
                       std::abs(f.coeffs[c * lat + i] - std::conj(f.coeffs[c * lat + j])));
  }
  CHECK(worst < 1e-15);
  CHECK(divergence_defect(f) < 1e-14);
  CHECK(l2_norm(f) == doctest::Approx(1.0).epsilon(1e-12));

  Rng rng2(7);
  const DivFreeField g = random_field(b3, rng2);
  double diff = 0.0;
  for (size_t i = 0; i < f.coeffs.size(); ++i)
    diff = std::max(diff, std::abs(f.coeffs[i] - g.coeffs[i]));
  CHECK(diff == 0.0);  // same seed, same field
}

TEST_CASE("leray projection kills gradients and is idempotent") {
  PeriodicBox b3;
  b3.dims = 3;
  b3.K = 3;
  const long lat = b3.lattice();

  DivFreeField g = zero_velocity(b3);
  for (long i = 0; i < lat; ++i) {
    const std::array<int, 3> k = wavevector(b3, i);
    const cplx s(0.3 * k[0] - 0.1 * k[2], 0.2 * k[1]);
    for (int c = 0; c < 3; ++c) g.coeffs[c * lat + i] = static_cast<double>(k[c]) * s;
  }
  leray_project(g);
  double mx = 0.0;
  for (const cplx& z : g.coeffs) mx = std::max(mx, std::abs(z));
  CHECK(mx < 1e-14);

  Rng rng(9);
  DivFreeField f = random_field(b3, rng);
  DivFreeField f2 = f;
  leray_project(f2);
  double diff = 0.0;
  for (size_t i = 0; i < f.coeffs.size(); ++i)
    diff = std::max(diff, std::abs(f.coeffs[i] - f2.coeffs[i]));
  CHECK(diff < 1e-15);
}

TEST_CASE("galerkin truncation preserves low modes and energy splits") {
  PeriodicBox b3;
  b3.dims = 3;
  b3.K = 3;
  Rng rng(11);
  const DivFreeField f = random_field(b3, rng);

  const DivFreeField full = galerkin_truncate(f, b3.K);
  double diff = 0.0;
  for (size_t i = 0; i < f.coeffs.size(); ++i)
    diff = std::max(diff, std::abs(f.coeffs[i] - full.coeffs[i]));
  CHECK(diff == 0.0);

  const DivFreeField low = galerkin_truncate(f, 1);
  const long lat = b3.lattice();
  double high_energy = 0.0;
  for (long i = 0; i < lat; ++i) {
    const std::array<int, 3> k = wavevector(b3, i);
    const bool inside = std::abs(k[0]) <= 1 && std::abs(k[1]) <= 1 && std::abs(k[2]) <= 1;
    for (int c = 0; c < 3; ++c) {
      const cplx z = low.coeffs[c * lat + i];
      if (!inside) CHECK(std::abs(z) == 0.0);
      const cplx d = f.coeffs[c * lat + i] - z;
      high_energy += std::norm(d);
    }
  }
  // Parseval: |f|^2 = |P_1 f|^2 + |f - P_1 f|^2.
  const double v = std::pow(2.0 * M_PI, 3);
  CHECK(l2_norm(f) * l2_norm(f) ==
        doctest::Approx(l2_norm(low) * l2_norm(low) + v * high_energy).epsilon(1e-12));
}

TEST_CASE("single-mode flow decays at the Stokes rate") {
  PeriodicBox b3;
  b3.dims = 3;
  b3.K = 2;
  const DivFreeField sm = sine_x_e2(b3);
  const TimeGrid grid{1.0, 64};
  const GalerkinTrajectory tr = ns_evolve(sm, 0.3, grid);
  const double want = std::exp(-0.3);
  const DivFreeField yT = tr.field_at(grid.steps);
  double err = 0.0;
  for (size_t i = 0; i < yT.coeffs.size(); ++i)
    err = std::max(err, std::abs(yT.coeffs[i] - want * sm.coeffs[i]));
  CHECK(err < 1e-13);  // integrating factor handles the viscous part exactly
  CHECK(energy_balance_residual(tr) < 1e-8);  // Simpson error in the enstrophy integral
}

TEST_CASE("the planar vortex decays exactly despite the nonlinearity") {
  const DivFreeField tg0 = taylor_green_2d(2);
  const double nu = 0.1;
  const TimeGrid grid{1.0, 32};
  const GalerkinTrajectory tr = ns_evolve(tg0, nu, grid);
  // Self-advection of the vortex is a pure gradient, so the projected
  // nonlinearity vanishes and each mode decays with its own factor.
  const double e0 = tr.energy_at(0);
  CHECK(tr.energy_at(grid.steps) == doctest::Approx(e0 * std::exp(-4.0 * nu)).epsilon(1e-12));
  CHECK(divergence_defect(tr.field_at(grid.steps)) < 1e-13);
}

TEST_CASE("norm ratio matches the single-mode closed form and is scale-free") {
  PeriodicBox b3;
  b3.dims = 3;
  b3.K = 2;
  const DivFreeField sm = sine_x_e2(b3);
  CHECK(ladyzhenskaya_ratio(sm) == doctest::Approx(0.19718456452834526).epsilon(1e-13));

  DivFreeField scaled = sm;
  for (cplx& z : scaled.coeffs) z *= -7.25;
  CHECK(std::abs(ladyzhenskaya_ratio(scaled) - ladyzhenskaya_ratio(sm)) < 1e-13);

  // Refined quadrature agrees with the default alias-free grid.
  CHECK(std::abs(ladyzhenskaya_ratio(sm, 4 * b3.K + 3) - ladyzhenskaya_ratio(sm)) < 1e-12);
}

TEST_CASE("runaway growth raises a divergence error") {
  PeriodicBox b3;
  b3.dims = 3;
  b3.K = 2;
  DivFreeField tiny = sine_x_e2(b3);
  for (cplx& z : tiny.coeffs) z *= 1e-9;
  const DivFreeField force = sine_x_e2(b3);
  const TimeGrid grid{1.0, 32};
  CHECK_THROWS_AS(ns_evolve(tiny, 0.01, grid, &force), DivergenceError);
}

TEST_CASE("uniqueness gaps shrink as the truncation captures the data") {
  PeriodicBox b3;
  b3.dims = 3;
  b3.K = 2;
  Rng rng(5);
  const DivFreeField y0 = random_field(b3, rng);
  const TimeGrid grid{0.25, 16};
  const UniquenessResult res = uniqueness_experiment(y0, 0.5, {1, 2}, grid);

  REQUIRE(res.rows.size() == 2);
  CHECK(res.reference_energy0 == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(res.max_l4 > 0.0);

  const UniquenessRow& partial = res.rows[0];
  const UniquenessRow& full = res.rows[1];
  CHECK(partial.n == 1);
  CHECK(full.n == 2);
  CHECK(partial.gap0 > 0.0);
  CHECK(full.gap0 < 1e-14);       // truncation at K reproduces the data
  CHECK(full.d_sup < 1e-12);      // identical data, identical trajectory
  CHECK(partial.d_sup >= partial.gap0 * 0.1);
  CHECK(partial.c_defined);
  CHECK(std::isfinite(partial.c_fit));
  REQUIRE(partial.d_series.size() == static_cast<size_t>(grid.steps) + 1);
  CHECK(partial.d_series.front() == doctest::Approx(partial.gap0));
}

TEST_CASE("hermitian symmetrization repairs a broken pair") {
  PeriodicBox b2;
  b2.dims = 2;
  b2.K = 1;
  DivFreeField f = zero_velocity(b2);
  const long lat = b2.lattice();
  f.coeffs[flat_index(b2, {1, 0, 0})] = cplx(1.0, 2.0);
  f.coeffs[flat_index(b2, {-1, 0, 0})] = cplx(0.0, 0.0);
  hermitian_symmetrize(f);
  const cplx a = f.coeffs[flat_index(b2, {1, 0, 0})];
  const cplx b = f.coeffs[flat_index(b2, {-1, 0, 0})];
  CHECK(a == std::conj(b));
  CHECK(a == cplx(0.5, 1.0));  // average of the original pair
}
