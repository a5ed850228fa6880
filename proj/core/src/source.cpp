#include "pclab/source.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "pclab/rng.hpp"
#include "pclab/transform.hpp"

namespace pclab {

double TimeProfile::at(double t) const {
  switch (kind) {
    case Kind::constant: return 1.0;
    case Kind::exp_decay: return std::exp(-rate * t);
    case Kind::ramp: return 1.0 + slope * t;
  }
  return 1.0;
}

bool SourceSpec::time_constant() const {
  if (kind == Kind::eigenmode) return profile.kind == TimeProfile::Kind::constant;
  return kind != Kind::nodal_series;
}

SpectralField constant_field(const BoxDomain& domain, const std::array<int, 3>& mode_cap, double value) {
  SpectralField f = zero_field(domain, mode_cap);
  const int d = domain.dims;
  // Per-axis factors 2(1-(-1)^k)/(k pi); zero for even k.
  std::array<std::vector<double>, 3> fac;
  for (int a = 0; a < d; ++a) {
    fac[a].resize(f.mode_cap[a]);
    for (int k = 1; k <= f.mode_cap[a]; ++k)
      fac[a][k - 1] = (k % 2 == 1) ? 4.0 / (k * M_PI) : 0.0;
  }
  size_t idx = 0;
  const int c1 = d > 1 ? f.mode_cap[1] : 1;
  const int c2 = d > 2 ? f.mode_cap[2] : 1;
  for (int k0 = 0; k0 < f.mode_cap[0]; ++k0)
    for (int k1 = 0; k1 < c1; ++k1)
      for (int k2 = 0; k2 < c2; ++k2, ++idx) {
        double v = value * fac[0][k0];
        if (d > 1) v *= fac[1][k1];
        if (d > 2) v *= fac[2][k2];
        f.coeffs[idx] = v;
      }
  return f;
}

namespace {

// Embed coefficients given on `band` into the (>=) `mode_cap` layout.
void embed_band(SpectralField& dst, const std::array<int, 3>& band, const std::vector<double>& src) {
  const int d = dst.domain.dims;
  std::array<int, 3> b = band;
  for (int a = d; a < 3; ++a) b[a] = 1;
  for (int a = 0; a < d; ++a)
    if (b[a] > dst.mode_cap[a]) throw std::invalid_argument("source band exceeds mode_cap");
  const int bc1 = d > 1 ? b[1] : 1, bc2 = d > 2 ? b[2] : 1;
  const int dc1 = d > 1 ? dst.mode_cap[1] : 1, dc2 = d > 2 ? dst.mode_cap[2] : 1;
  for (int k0 = 0; k0 < b[0]; ++k0)
    for (int k1 = 0; k1 < bc1; ++k1)
      for (int k2 = 0; k2 < bc2; ++k2)
        dst.coeffs[(static_cast<size_t>(k0) * dc1 + k1) * dc2 + k2] +=
            src[(static_cast<size_t>(k0) * bc1 + k1) * bc2 + k2];
}

}  // namespace

SpectralField banded_random_field(const BoxDomain& domain, const std::array<int, 3>& mode_cap,
                                  const std::array<int, 3>& band, uint64_t seed, double c, double M) {
  if (!(c <= M)) throw std::invalid_argument("banded_random: need c <= M");
  const int d = domain.dims;
  std::array<int, 3> b = band;
  for (int a = d; a < 3; ++a) b[a] = 1;
  int nb = 1;
  for (int a = 0; a < d; ++a) nb *= b[a];

  Rng rng(seed);
  std::vector<double> g(nb);
  for (double& v : g) v = rng.uniform(-1.0, 1.0);

  SpectralField gf = zero_field(domain, b);
  gf.coeffs = g;
  const NodalField gn = from_spectral(gf);
  const auto [mn_it, mx_it] = std::minmax_element(gn.values.begin(), gn.values.end());
  const double gmin = *mn_it, gmax = *mx_it;

  SpectralField out;
  if (gmax - gmin < 1e-12) {
    out = constant_field(domain, mode_cap, 0.5 * (c + M));
  } else {
    const double scale = (M - c) / (gmax - gmin);
    for (double& v : g) v *= scale;
    out = constant_field(domain, mode_cap, c - scale * gmin);
    embed_band(out, b, g);
  }
  return out;
}

std::vector<double> source_coefficients(const SourceSpec& u, const BoxDomain& domain,
                                        const std::array<int, 3>& mode_cap, const TimeGrid& grid) {
  domain.validate();
  grid.validate();
  const int d = domain.dims;
  std::array<int, 3> cap = mode_cap;
  for (int a = d; a < 3; ++a) cap[a] = 1;
  int modes = 1;
  for (int a = 0; a < d; ++a) modes *= cap[a];
  const int nt = grid.node_count();
  std::vector<double> out(static_cast<size_t>(nt) * modes, 0.0);

  auto broadcast = [&](const SpectralField& f) {
    for (int m = 0; m < nt; ++m)
      std::copy(f.coeffs.begin(), f.coeffs.end(), out.begin() + static_cast<size_t>(m) * modes);
  };

  switch (u.kind) {
    case SourceSpec::Kind::zero:
      break;
    case SourceSpec::Kind::constant:
      broadcast(constant_field(domain, cap, u.value));
      break;
    case SourceSpec::Kind::eigenmode: {
      SpectralField f = zero_field(domain, cap);
      std::array<int, 3> k = u.mode;
      for (int a = d; a < 3; ++a) k[a] = 1;
      for (int a = 0; a < d; ++a)
        if (k[a] < 1 || k[a] > cap[a])
          throw std::invalid_argument("eigenmode source: mode outside band");
      const int c1 = d > 1 ? cap[1] : 1, c2 = d > 2 ? cap[2] : 1;
      f.coeffs[(static_cast<size_t>(k[0] - 1) * c1 + (d > 1 ? k[1] - 1 : 0)) * c2 +
               (d > 2 ? k[2] - 1 : 0)] = u.amplitude;
      for (int m = 0; m < nt; ++m) {
        const double s = u.profile.at(grid.node(m));
        for (int i = 0; i < modes; ++i)
          out[static_cast<size_t>(m) * modes + i] = s * f.coeffs[i];
      }
      break;
    }
    case SourceSpec::Kind::nodal_series: {
      const int nodes = domain.total_nodes();
      if (static_cast<int>(u.nodal.size()) != nt * nodes)
        throw std::invalid_argument("nodal_series source: sample count mismatch");
      NodalField slice;
      slice.domain = domain;
      for (int m = 0; m < nt; ++m) {
        slice.values.assign(u.nodal.begin() + static_cast<size_t>(m) * nodes,
                            u.nodal.begin() + static_cast<size_t>(m + 1) * nodes);
        const SpectralField f = to_spectral(slice, cap);
        std::copy(f.coeffs.begin(), f.coeffs.end(), out.begin() + static_cast<size_t>(m) * modes);
      }
      break;
    }
    case SourceSpec::Kind::banded_random:
      broadcast(banded_random_field(domain, cap, u.band, u.seed, u.bound_c, u.bound_M));
      break;
    case SourceSpec::Kind::spectral: {
      SpectralField f = zero_field(domain, cap);
      std::array<int, 3> b = u.band;
      for (int a = d; a < 3; ++a) b[a] = 1;
      int nb = 1;
      for (int a = 0; a < d; ++a) nb *= b[a];
      if (static_cast<int>(u.coeffs.size()) != nb)
        throw std::invalid_argument("spectral source: coefficient count mismatch");
      embed_band(f, b, u.coeffs);
      broadcast(f);
      break;
    }
    case SourceSpec::Kind::spectral_decay: {
      if (d != 1) throw std::invalid_argument("spectral_decay source: 1-D only");
      SpectralField f = zero_field(domain, cap);
      const int kb = std::min(u.band[0], cap[0]);
      for (int k = 1; k <= kb; ++k)
        f.coeffs[k - 1] = u.amplitude * std::pow(static_cast<double>(k), -u.exponent);
      broadcast(f);
      break;
    }
  }
  return out;
}

std::vector<double> source_nodal(const SourceSpec& u, const BoxDomain& domain, const TimeGrid& grid) {
  domain.validate();
  grid.validate();
  const int nodes = domain.total_nodes();
  const int nt = grid.node_count();
  std::vector<double> out(static_cast<size_t>(nt) * nodes, 0.0);

  switch (u.kind) {
    case SourceSpec::Kind::zero:
      break;
    case SourceSpec::Kind::constant:
      std::fill(out.begin(), out.end(), u.value);
      break;
    case SourceSpec::Kind::nodal_series:
      if (static_cast<int>(u.nodal.size()) != nt * nodes)
        throw std::invalid_argument("nodal_series source: sample count mismatch");
      out = u.nodal;
      break;
    case SourceSpec::Kind::banded_random: {
      // Affine map applied to nodal values directly, so samples land in
      // [c, M] exactly (the spectral ingestion reproduces the same function).
      const int d = domain.dims;
      std::array<int, 3> b = u.band;
      for (int a = d; a < 3; ++a) b[a] = 1;
      int nb = 1;
      for (int a = 0; a < d; ++a) nb *= b[a];
      Rng rng(u.seed);
      std::vector<double> g(nb);
      for (double& v : g) v = rng.uniform(-1.0, 1.0);
      SpectralField gf = zero_field(domain, b);
      gf.coeffs = g;
      const NodalField gn = from_spectral(gf);
      const auto [mn_it, mx_it] = std::minmax_element(gn.values.begin(), gn.values.end());
      const double gmin = *mn_it, gmax = *mx_it;
      std::vector<double> base(nodes, 0.5 * (u.bound_c + u.bound_M));
      if (gmax - gmin >= 1e-12) {
        const double scale = (u.bound_M - u.bound_c) / (gmax - gmin);
        for (int j = 0; j < nodes; ++j) base[j] = u.bound_c + scale * (gn.values[j] - gmin);
      }
      for (int m = 0; m < nt; ++m)
        std::copy(base.begin(), base.end(), out.begin() + static_cast<size_t>(m) * nodes);
      break;
    }
    default: {
      // Band-limited kinds: sample by synthesis of the band coefficients.
      std::array<int, 3> cap = u.band;
      if (u.kind == SourceSpec::Kind::eigenmode) cap = u.mode;
      for (int a = 0; a < domain.dims; ++a) cap[a] = std::max(cap[a], 1);
      TimeGrid one{1.0, 1};
      const auto coef = source_coefficients(u, domain, cap, one);
      SpectralField f = zero_field(domain, cap);
      std::copy(coef.begin(), coef.begin() + f.coeffs.size(), f.coeffs.begin());
      const NodalField base = from_spectral(f);
      if (u.time_constant()) {
        for (int m = 0; m < nt; ++m)
          std::copy(base.values.begin(), base.values.end(), out.begin() + static_cast<size_t>(m) * nodes);
      } else {
        for (int m = 0; m < nt; ++m) {
          const double s = u.profile.at(grid.node(m));
          for (int j = 0; j < nodes; ++j)
            out[static_cast<size_t>(m) * nodes + j] = s * base.values[j];
        }
      }
      break;
    }
  }
  return out;
}

std::vector<std::string> check_declared_bounds(const SourceSpec& u, const BoxDomain& domain,
                                               const TimeGrid& grid) {
  std::vector<std::string> bad;
  if (!u.has_bounds) return bad;
  if (!(u.bound_c > 0.0)) bad.push_back("bounds.c must be > 0");
  if (!(u.bound_c <= u.bound_M)) bad.push_back("bounds require c <= M");
  if (!bad.empty()) return bad;
  const auto samples = source_nodal(u, domain, grid);
  double mn = samples.empty() ? 0.0 : samples[0], mx = mn;
  for (double v : samples) {
    mn = std::min(mn, v);
    mx = std::max(mx, v);
  }
  const double slack = 1e-12 * std::max(1.0, std::abs(u.bound_M));
  if (mn < u.bound_c - slack)
    bad.push_back("source samples fall below declared lower bound c");
  if (mx > u.bound_M + slack)
    bad.push_back("source samples exceed declared upper bound M");
  return bad;
}

}  // namespace pclab
