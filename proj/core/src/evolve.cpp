#include "pclab/evolve.hpp"

#include <cmath>
#include <stdexcept>

#include "pclab/transform.hpp"

namespace pclab {

SpectralField Trajectory::field_at(int m) const {
  if (m < 0 || m > grid.steps) throw std::out_of_range("Trajectory: node index");
  SpectralField f;
  f.domain = domain;
  f.mode_cap = mode_cap;
  f.coeffs.assign(node(m), node(m) + modes());
  return f;
}

SpectralField heat_evolve(const SpectralField& y0, double t) {
  y0.validate();
  if (t < 0.0) throw std::invalid_argument("heat_evolve: t must be >= 0");
  const auto lam = eigenvalue_table(y0.domain, y0.mode_cap);
  SpectralField out = y0;
  for (size_t i = 0; i < out.coeffs.size(); ++i) out.coeffs[i] *= std::exp(-lam[i] * t);
  return out;
}

SpectralField backward_heat(const SpectralField& eta_T, double T, double s) {
  if (s < 0.0 || s > T) throw std::invalid_argument("backward_heat: s must lie in [0, T]");
  return heat_evolve(eta_T, T - s);
}

void duhamel_weights(double a, double* A, double* B) {
  if (a < 1e-4) {
    *A = 0.5 - a / 3.0 + a * a / 8.0 - a * a * a / 30.0;
    *B = 0.5 - a / 6.0 + a * a / 24.0 - a * a * a / 120.0;
  } else {
    const double e = std::exp(-a);
    *A = (1.0 - e * (1.0 + a)) / (a * a);
    *B = (a - 1.0 + e) / (a * a);
  }
}

Trajectory parabolic_evolve(const SpectralField& y0, const std::vector<double>& source_nodes,
                            const TimeGrid& grid, Method method) {
  y0.validate();
  grid.validate();
  const int modes = y0.total_modes();
  const int nt = grid.node_count();
  if (static_cast<int>(source_nodes.size()) != nt * modes)
    throw std::invalid_argument("parabolic_evolve: source sample count mismatch");

  const auto lam = eigenvalue_table(y0.domain, y0.mode_cap);
  const double h = grid.dt();

  Trajectory traj;
  traj.domain = y0.domain;
  traj.mode_cap = y0.mode_cap;
  traj.grid = grid;
  traj.coeffs.assign(static_cast<size_t>(nt) * modes, 0.0);
  std::copy(y0.coeffs.begin(), y0.coeffs.end(), traj.coeffs.begin());

  if (method == Method::duhamel) {
    std::vector<double> E(modes), A(modes), B(modes);
    for (int i = 0; i < modes; ++i) {
      const double a = lam[i] * h;
      E[i] = std::exp(-a);
      duhamel_weights(a, &A[i], &B[i]);
    }
    for (int m = 0; m < grid.steps; ++m) {
      const double* um = source_nodes.data() + static_cast<size_t>(m) * modes;
      const double* up = um + modes;
      const double* cm = traj.coeffs.data() + static_cast<size_t>(m) * modes;
      double* cp = traj.coeffs.data() + static_cast<size_t>(m + 1) * modes;
      for (int i = 0; i < modes; ++i)
        cp[i] = E[i] * cm[i] + h * (A[i] * um[i] + B[i] * up[i]);
    }
  } else {
    std::vector<double> num(modes), den(modes);
    for (int i = 0; i < modes; ++i) {
      const double a = lam[i] * h;
      num[i] = 1.0 - 0.5 * a;
      den[i] = 1.0 + 0.5 * a;
    }
    for (int m = 0; m < grid.steps; ++m) {
      const double* um = source_nodes.data() + static_cast<size_t>(m) * modes;
      const double* up = um + modes;
      const double* cm = traj.coeffs.data() + static_cast<size_t>(m) * modes;
      double* cp = traj.coeffs.data() + static_cast<size_t>(m + 1) * modes;
      for (int i = 0; i < modes; ++i)
        cp[i] = (num[i] * cm[i] + 0.5 * h * (um[i] + up[i])) / den[i];
    }
  }
  return traj;
}

Trajectory parabolic_evolve(const SpectralField& y0, const SourceSpec& u, const TimeGrid& grid,
                            Method method) {
  const auto src = source_coefficients(u, y0.domain, y0.mode_cap, grid);
  return parabolic_evolve(y0, src, grid, method);
}

double positivity_check(const Trajectory& traj) {
  double mn = 0.0;
  bool first = true;
  for (int m = 0; m <= traj.grid.steps; ++m) {
    const NodalField f = from_spectral(traj.field_at(m));
    for (double v : f.values) {
      if (first || v < mn) mn = v;
      first = false;
    }
  }
  return mn;
}

double coefficient_decay_rate(const SpectralField& f, double floor) {
  const auto lam = eigenvalue_table(f.domain, f.mode_cap);
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (size_t i = 0; i < f.coeffs.size(); ++i) {
    const double c = std::abs(f.coeffs[i]);
    if (c <= floor) continue;
    const double x = std::log(lam[i]), y = std::log(c);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  if (n < 2) return 0.0;
  const double denom = n * sxx - sx * sx;
  if (std::abs(denom) < 1e-300) return 0.0;
  return (n * sxy - sx * sy) / denom;
}

}  // namespace pclab
