#pragma once

#include <vector>

#include "pclab/box.hpp"
#include "pclab/field.hpp"
#include "pclab/source.hpp"

namespace pclab {

enum class Method { duhamel, crank_nicolson };

// Spectral coefficients at every time node, flattened (steps+1) x modes.
struct Trajectory {
  BoxDomain domain;
  std::array<int, 3> mode_cap{1, 1, 1};
  TimeGrid grid;
  std::vector<double> coeffs;

  int modes() const {
    int n = 1;
    for (int a = 0; a < domain.dims; ++a) n *= mode_cap[a];
    return n;
  }
  const double* node(int m) const { return coeffs.data() + static_cast<size_t>(m) * modes(); }
  SpectralField field_at(int m) const;
};

// Exact propagator c_k -> exp(-lambda_k t) c_k.
SpectralField heat_evolve(const SpectralField& y0, double t);

// Backward dual: eta(s) = heat_evolve(eta_T, T - s) for 0 <= s <= T.
SpectralField backward_heat(const SpectralField& eta_T, double T, double s);

// Quadrature weights for one Duhamel step of length h on a mode with
// a = lambda*h, integrating exp(-lambda(t-s)) against a linear interpolant:
//   c_next = exp(-a) c + h (A * u_m + B * u_{m+1}).
// Series branch below a = 1e-4 avoids cancellation.
void duhamel_weights(double a, double* A, double* B);

// March the spectral ODE system c' = -lambda c + u(t) with source samples
// given per time node ((steps+1) x modes). duhamel integrates the
// exponential kernel exactly against the piecewise-linear-in-time samples;
// crank_nicolson is the trapezoidal theta = 1/2 step.
Trajectory parabolic_evolve(const SpectralField& y0, const std::vector<double>& source_nodes,
                            const TimeGrid& grid, Method method);

Trajectory parabolic_evolve(const SpectralField& y0, const SourceSpec& u, const TimeGrid& grid,
                            Method method);

// Minimum nodal value over all space-time nodes of the trajectory.
double positivity_check(const Trajectory& traj);

// Least-squares slope of log|c_k| against log lambda_k over the modes with
// |c_k| > floor; reported as a spatial-smoothness indicator.
double coefficient_decay_rate(const SpectralField& f, double floor = 1e-14);

}  // namespace pclab
