#include <cmath>

#include "doctest.h"
#include "pclab/field.hpp"
#include "pclab/rng.hpp"
#include "pclab/source.hpp"
#include "pclab/transform.hpp"

using namespace pclab;

namespace {
constexpr double kPi = 3.14159265358979323846;

BoxDomain box1(double L = kPi, int n = 256) {
  BoxDomain d;
  d.dims = 1;
  d.lengths = {L, 1.0, 1.0};
  d.grid_points = {n, 4, 4};
  return d;
}
}  // namespace

TEST_CASE("box validation rejects degenerate shapes") {
  BoxDomain d = box1();
  d.grid_points[0] = 3;
  CHECK_THROWS(d.validate());
  d = box1();
  d.lengths[0] = 0.0;
  CHECK_THROWS(d.validate());
  d = box1();
  CHECK_NOTHROW(d.validate());
  CHECK(d.spacing(0) == doctest::Approx(kPi / 257.0).epsilon(1e-15));
}

TEST_CASE("transform roundtrip is exact to roundoff") {
  for (int dims = 1; dims <= 3; ++dims) {
    BoxDomain d;
    d.dims = dims;
    d.lengths = {kPi, 2.0, 1.3};
    d.grid_points = {dims == 1 ? 64 : 16, 12, 10};
    std::array<int, 3> cap{dims == 1 ? 64 : 16, 12, 10};
    for (int a = dims; a < 3; ++a) cap[a] = 1;
    SpectralField f = zero_field(d, cap);
    Rng rng(7);
    for (double& c : f.coeffs) c = rng.uniform(-1.0, 1.0);
    const SpectralField back = to_spectral(from_spectral(f), cap);
    double err = 0.0;
    for (size_t i = 0; i < f.coeffs.size(); ++i)
      err = std::max(err, std::abs(f.coeffs[i] - back.coeffs[i]));
    CHECK(err < 1e-12);
  }
}

TEST_CASE("x(L-x) leading sine coefficient matches the closed form") {
  // (x(L-x), sin(pi x / L)) * 2/L = 8 L^2 / pi^3; L = 2 gives 1.0320491018623839.
  BoxDomain d = box1(2.0, 512);
  NodalField g;
  g.domain = d;
  const auto xs = axis_nodes(d, 0);
  g.values.resize(xs.size());
  for (size_t i = 0; i < xs.size(); ++i) g.values[i] = xs[i] * (2.0 - xs[i]);
  const SpectralField c = to_spectral(g, {64, 1, 1});
  CHECK(c.coeffs[0] == doctest::Approx(1.0320491018623839).epsilon(1e-8));
  CHECK(std::abs(c.coeffs[1]) < 1e-12);  // even modes vanish by symmetry
}

TEST_CASE("spectral norms reproduce sine-function integrals") {
  BoxDomain d = box1();
  SpectralField f = zero_field(d, {16, 1, 1});
  f.coeffs[0] = 1.0;  // sin(x) on (0, pi)
  CHECK(spectral_norm(f, Norm::L2) == doctest::Approx(std::sqrt(kPi / 2.0)).epsilon(1e-14));
  CHECK(spectral_norm(f, Norm::H1_0) == doctest::Approx(std::sqrt(kPi / 2.0)).epsilon(1e-14));
  CHECK(spectral_norm(f, Norm::H_minus1) == doctest::Approx(std::sqrt(kPi / 2.0)).epsilon(1e-14));
  // integral of sin^4 over (0, pi) is 3 pi / 8.
  CHECK(l4_norm(from_spectral(f)) ==
        doctest::Approx(std::pow(3.0 * kPi / 8.0, 0.25)).epsilon(1e-6));
  CHECK_THROWS(spectral_norm(f, Norm::L4));
}

TEST_CASE("inner product against the constant function gives (sin, 1) = 2") {
  BoxDomain d = box1();
  SpectralField f = zero_field(d, {64, 1, 1});
  f.coeffs[0] = 1.0;
  const SpectralField one = constant_field(d, {64, 1, 1}, 1.0);
  CHECK(inner_product(f, one) == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("norm scales order as H_minus1 <= Poincare L2 <= H1_0 for mode 3") {
  BoxDomain d = box1();
  SpectralField f = zero_field(d, {8, 1, 1});
  f.coeffs[2] = 1.0;  // k = 3, lambda = 9
  const double l2 = spectral_norm(f, Norm::L2);
  CHECK(spectral_norm(f, Norm::H_minus1) == doctest::Approx(l2 / 3.0).epsilon(1e-14));
  CHECK(spectral_norm(f, Norm::H1_0) == doctest::Approx(3.0 * l2).epsilon(1e-14));
}

TEST_CASE("eigenvalue table is laid out row-major, last axis fastest") {
  BoxDomain d;
  d.dims = 2;
  d.lengths = {1.0, 2.0, 1.0};
  d.grid_points = {8, 8, 4};
  const auto lam = eigenvalue_table(d, {2, 3, 1});
  REQUIRE(lam.size() == 6);
  CHECK(lam[0] == doctest::Approx(laplacian_eigenvalue({1, 1, 1}, d)).epsilon(1e-15));
  CHECK(lam[5] == doctest::Approx(laplacian_eigenvalue({2, 3, 1}, d)).epsilon(1e-15));
  CHECK(laplacian_eigenvalue({2, 3, 1}, d) ==
        doctest::Approx(4.0 * kPi * kPi + 9.0 * kPi * kPi / 4.0).epsilon(1e-14));
}

TEST_CASE("rng streams are deterministic and salt-separated") {
  Rng a(42), b(42), c(Rng::mix(42, 1));
  bool same = true, differ = false;
  for (int i = 0; i < 64; ++i) {
    const double x = a.uniform(), y = b.uniform(), z = c.uniform();
    same = same && (x == y);
    differ = differ || (x != z);
    CHECK(x >= 0.0);
    CHECK(x < 1.0);
  }
  CHECK(same);
  CHECK(differ);
  CHECK(Rng::mix(42, 1) != Rng::mix(42, 2));
}

TEST_CASE("synth_at agrees with from_spectral on the domain grid") {
  BoxDomain d = box1(kPi, 32);
  SpectralField f = zero_field(d, {8, 1, 1});
  Rng rng(3);
  for (double& c : f.coeffs) c = rng.uniform(-1.0, 1.0);
  const NodalField g = from_spectral(f);
  std::array<std::vector<double>, 3> nodes;
  nodes[0] = axis_nodes(d, 0);
  const auto vals = synth_at(f, nodes);
  REQUIRE(vals.size() == g.values.size());
  for (size_t i = 0; i < vals.size(); ++i) CHECK(vals[i] == doctest::Approx(g.values[i]).epsilon(1e-12));
}
