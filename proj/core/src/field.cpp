#include "pclab/field.hpp"

#include <cmath>
#include <stdexcept>

namespace pclab {

void SpectralField::validate() const {
  domain.validate();
  for (int a = 0; a < domain.dims; ++a)
    if (mode_cap[a] < 1) throw std::invalid_argument("SpectralField: mode_cap must be >= 1");
  if (static_cast<int>(coeffs.size()) != total_modes())
    throw std::invalid_argument("SpectralField: coefficient count does not match mode_cap");
  for (double c : coeffs)
    if (!std::isfinite(c)) throw std::invalid_argument("SpectralField: non-finite coefficient");
}

double laplacian_eigenvalue(const std::array<int, 3>& k, const BoxDomain& domain) {
  domain.validate();
  double lam = 0.0;
  for (int a = 0; a < domain.dims; ++a) {
    if (k[a] < 1) throw std::invalid_argument("laplacian_eigenvalue: mode index must be >= 1");
    const double w = k[a] * M_PI / domain.lengths[a];
    lam += w * w;
  }
  return lam;
}

std::vector<double> eigenvalue_table(const BoxDomain& domain, const std::array<int, 3>& mode_cap) {
  const int d = domain.dims;
  std::array<int, 3> cap = mode_cap;
  for (int a = d; a < 3; ++a) cap[a] = 1;
  std::vector<double> lam;
  lam.reserve(static_cast<size_t>(cap[0]) * cap[1] * cap[2]);
  for (int k0 = 1; k0 <= cap[0]; ++k0)
    for (int k1 = 1; k1 <= (d > 1 ? cap[1] : 1); ++k1)
      for (int k2 = 1; k2 <= (d > 2 ? cap[2] : 1); ++k2) {
        double v = std::pow(k0 * M_PI / domain.lengths[0], 2);
        if (d > 1) v += std::pow(k1 * M_PI / domain.lengths[1], 2);
        if (d > 2) v += std::pow(k2 * M_PI / domain.lengths[2], 2);
        lam.push_back(v);
      }
  return lam;
}

double basis_volume(const BoxDomain& domain) {
  double g = 1.0;
  for (int a = 0; a < domain.dims; ++a) g *= domain.lengths[a] / 2.0;
  return g;
}

double spectral_norm(const SpectralField& f, Norm which) {
  f.validate();
  const double gamma = basis_volume(f.domain);
  if (which == Norm::L4)
    throw std::invalid_argument("spectral_norm: L4 requires nodal quadrature, use l4_norm");
  const auto lam = eigenvalue_table(f.domain, f.mode_cap);
  double s = 0.0;
  for (size_t i = 0; i < f.coeffs.size(); ++i) {
    const double c2 = f.coeffs[i] * f.coeffs[i];
    switch (which) {
      case Norm::L2: s += c2; break;
      case Norm::H1_0: s += lam[i] * c2; break;
      case Norm::H_minus1: s += c2 / lam[i]; break;
      default: break;
    }
  }
  return std::sqrt(gamma * s);
}

double inner_product(const SpectralField& f, const SpectralField& g) {
  f.validate();
  g.validate();
  if (!f.domain.same_as(g.domain) || f.mode_cap != g.mode_cap)
    throw std::invalid_argument("inner_product: domain or band mismatch");
  const double gamma = basis_volume(f.domain);
  double s = 0.0;
  for (size_t i = 0; i < f.coeffs.size(); ++i) s += f.coeffs[i] * g.coeffs[i];
  return gamma * s;
}

double l2_norm_nodal(const NodalField& f) {
  f.validate();
  double s = 0.0;
  for (double v : f.values) s += v * v;
  return std::sqrt(f.domain.node_weight() * s);
}

double l4_norm(const NodalField& f) {
  f.validate();
  double s = 0.0;
  for (double v : f.values) {
    const double v2 = v * v;
    s += v2 * v2;
  }
  return std::pow(f.domain.node_weight() * s, 0.25);
}

SpectralField zero_field(const BoxDomain& domain, const std::array<int, 3>& mode_cap) {
  SpectralField f;
  f.domain = domain;
  f.mode_cap = mode_cap;
  for (int a = domain.dims; a < 3; ++a) f.mode_cap[a] = 1;
  f.coeffs.assign(static_cast<size_t>(f.total_modes()), 0.0);
  return f;
}

}  // namespace pclab
