#pragma once

#include <array>
#include <vector>

#include "pclab/box.hpp"

namespace pclab {

// Coefficients in the Dirichlet sine eigenbasis prod_i sin(k_i pi x_i / L_i),
// k_i = 1..mode_cap_i, stored row-major with the last axis fastest.
struct SpectralField {
  BoxDomain domain;
  std::array<int, 3> mode_cap{1, 1, 1};
  std::vector<double> coeffs;

  void validate() const;
  int total_modes() const {
    int n = 1;
    for (int a = 0; a < domain.dims; ++a) n *= mode_cap[a];
    return n;
  }
};

enum class Norm { L2, L4, H1_0, H_minus1 };

// Eigenvalue of -Laplacian for multi-index k (1-based): sum (k_i pi / L_i)^2.
double laplacian_eigenvalue(const std::array<int, 3>& k, const BoxDomain& domain);

// Flat eigenvalue table in coefficient storage order.
std::vector<double> eigenvalue_table(const BoxDomain& domain, const std::array<int, 3>& mode_cap);

// Volume factor: integral of a squared basis function, prod_i (L_i / 2).
double basis_volume(const BoxDomain& domain);

// L2, H1_0, H_minus1 from coefficients (L4 has no closed spectral form; see l4_norm).
double spectral_norm(const SpectralField& f, Norm which);

double inner_product(const SpectralField& f, const SpectralField& g);

// Nodal quadrature norms (trapezoid; boundary values vanish).
double l2_norm_nodal(const NodalField& f);
double l4_norm(const NodalField& f);

SpectralField zero_field(const BoxDomain& domain, const std::array<int, 3>& mode_cap);

}  // namespace pclab
