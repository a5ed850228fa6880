#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "pclab/box.hpp"
#include "pclab/field.hpp"

namespace pclab {

// Scalar time profile multiplying a fixed spatial shape.
struct TimeProfile {
  enum class Kind { constant, exp_decay, ramp };
  Kind kind = Kind::constant;
  double rate = 0.0;   // exp_decay: exp(-rate * t)
  double slope = 0.0;  // ramp: 1 + slope * t

  double at(double t) const;
};

// Declarative right-hand side u(x, t).
struct SourceSpec {
  enum class Kind { zero, constant, eigenmode, nodal_series, banded_random, spectral, spectral_decay };
  Kind kind = Kind::zero;

  double value = 0.0;            // constant
  std::array<int, 3> mode{1, 1, 1};
  double amplitude = 1.0;        // eigenmode, spectral_decay
  TimeProfile profile;           // eigenmode time dependence
  std::vector<double> nodal;     // nodal_series: (steps+1) x nodes
  uint64_t seed = 0;             // banded_random
  std::array<int, 3> band{1, 1, 1};  // banded_random / spectral / spectral_decay
  std::vector<double> coeffs;    // spectral: time-constant coefficients on `band`
  double exponent = 1.0;         // spectral_decay: u_k = amplitude * k^(-exponent)

  bool has_bounds = false;       // declared 0 < c <= u <= M
  double bound_c = 0.0;
  double bound_M = 0.0;

  bool time_constant() const;
};

// Exact sine coefficients of the constant function `value`:
// value * prod_i 2(1-(-1)^k_i)/(k_i pi). Nodal projection of a constant
// aliases at O(n^-2); the closed form keeps constant sources exact.
SpectralField constant_field(const BoxDomain& domain, const std::array<int, 3>& mode_cap, double value);

// Time-constant banded-random field with nodal values affinely mapped onto
// [c, M] exactly (min/max taken on the domain grid).
SpectralField banded_random_field(const BoxDomain& domain, const std::array<int, 3>& mode_cap,
                                  const std::array<int, 3>& band, uint64_t seed, double c, double M);

// Spectral coefficients of the source at every time node, flattened
// (steps+1) x modes.
std::vector<double> source_coefficients(const SourceSpec& u, const BoxDomain& domain,
                                        const std::array<int, 3>& mode_cap, const TimeGrid& grid);

// Samples of the declared source on the domain grid at every time node,
// flattened (steps+1) x nodes. For kind=constant the sample is the declared
// value itself (not its band-limited synthesis).
std::vector<double> source_nodal(const SourceSpec& u, const BoxDomain& domain, const TimeGrid& grid);

// Verify declared bounds against the sampled source; returns violation
// messages (empty when admissible or when no bounds are declared).
std::vector<std::string> check_declared_bounds(const SourceSpec& u, const BoxDomain& domain,
                                               const TimeGrid& grid);

}  // namespace pclab
