#pragma once

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace pclab {

// Axis-aligned box (0,L1)x...x(0,Ld) with a uniform interior grid per axis.
// Grid nodes on axis i are x_j = j*L_i/(n_i+1), j = 1..n_i; the boundary is
// not stored (homogeneous Dirichlet).
struct BoxDomain {
  int dims = 1;
  std::array<double, 3> lengths{1.0, 1.0, 1.0};
  std::array<int, 3> grid_points{4, 4, 4};

  void validate() const {
    if (dims < 1 || dims > 3) throw std::invalid_argument("BoxDomain: dims must be 1, 2, or 3");
    for (int a = 0; a < dims; ++a) {
      if (!(lengths[a] > 0.0)) throw std::invalid_argument("BoxDomain: lengths must be > 0");
      if (grid_points[a] < 4) throw std::invalid_argument("BoxDomain: grid_points must be >= 4");
    }
  }

  int total_nodes() const {
    int n = 1;
    for (int a = 0; a < dims; ++a) n *= grid_points[a];
    return n;
  }

  double spacing(int axis) const { return lengths[axis] / (grid_points[axis] + 1); }

  // Nodal quadrature weight: trapezoid on the uniform grid collapses to
  // h1*...*hd per interior node because fields vanish on the boundary.
  double node_weight() const {
    double w = 1.0;
    for (int a = 0; a < dims; ++a) w *= spacing(a);
    return w;
  }

  bool same_as(const BoxDomain& o) const {
    if (dims != o.dims) return false;
    for (int a = 0; a < dims; ++a)
      if (lengths[a] != o.lengths[a] || grid_points[a] != o.grid_points[a]) return false;
    return true;
  }
};

// Values on the interior grid, row-major with the last axis fastest.
struct NodalField {
  BoxDomain domain;
  std::vector<double> values;

  void validate() const {
    domain.validate();
    if (static_cast<int>(values.size()) != domain.total_nodes())
      throw std::invalid_argument("NodalField: value count does not match grid");
    for (double v : values)
      if (!std::isfinite(v)) throw std::invalid_argument("NodalField: non-finite value");
  }
};

// Uniform time grid t_m = m*T/steps, m = 0..steps.
struct TimeGrid {
  double horizon = 1.0;
  int steps = 1;

  void validate() const {
    if (!(horizon > 0.0)) throw std::invalid_argument("TimeGrid: horizon must be > 0");
    if (steps < 1) throw std::invalid_argument("TimeGrid: steps must be >= 1");
  }

  double dt() const { return horizon / steps; }
  double node(int m) const { return horizon * m / steps; }
  int node_count() const { return steps + 1; }
};

}  // namespace pclab
