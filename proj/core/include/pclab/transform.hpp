#pragma once

#include <array>
#include <vector>

#include "pclab/box.hpp"
#include "pclab/field.hpp"

namespace pclab {

// Discrete sine analysis: coefficients of the sine expansion sampled on the
// interior grid. Exact inverse of from_spectral on band-limited fields by the
// discrete orthogonality sum_j sin(k pi j/(n+1)) sin(m pi j/(n+1)) = (n+1)/2 delta_km.
SpectralField to_spectral(const NodalField& f, const std::array<int, 3>& mode_cap);

// Pointwise synthesis sum_k c_k prod_i sin(k_i pi x_i / L_i) on the domain grid.
NodalField from_spectral(const SpectralField& c);

// Synthesis on an arbitrary tensor grid given by per-axis point lists
// (used by resolution ladders to sample a refined solution at base nodes).
std::vector<double> synth_at(const SpectralField& c, const std::array<std::vector<double>, 3>& points);

// Per-axis interior node coordinates x_j = j L/(n+1).
std::vector<double> axis_nodes(const BoxDomain& domain, int axis);

}  // namespace pclab
