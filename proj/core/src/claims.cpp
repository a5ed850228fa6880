#include "pclab/claims.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "pclab/transform.hpp"

namespace pclab {

double proportionality_residual(const SpectralField& y, const SpectralField& phi) {
  const double ny = spectral_norm(y, Norm::L2);
  const double np = spectral_norm(phi, Norm::L2);
  if (ny <= 0.0 || np <= 0.0)
    throw std::domain_error("proportionality_residual: vanishing norm");
  const double gamma = basis_volume(y.domain);
  double s = 0.0;
  for (size_t i = 0; i < y.coeffs.size(); ++i) {
    const double d = np * y.coeffs[i] - ny * phi.coeffs[i];
    s += d * d;
  }
  return std::sqrt(gamma * s) / (ny * np);
}

ProportionalityResult proportionality_run(const SpectralField& y0, const SourceSpec& u,
                                          const TimeGrid& grid) {
  const Trajectory y = parabolic_evolve(y0, u, grid, Method::duhamel);
  const auto lam = eigenvalue_table(y0.domain, y0.mode_cap);
  ProportionalityResult out;
  out.t.resize(grid.node_count());
  out.r.resize(grid.node_count());
  SpectralField phi = y0;
  for (int m = 0; m <= grid.steps; ++m) {
    out.t[m] = grid.node(m);
    for (size_t i = 0; i < phi.coeffs.size(); ++i)
      phi.coeffs[i] = y0.coeffs[i] * std::exp(-lam[i] * out.t[m]);
    out.r[m] = proportionality_residual(y.field_at(m), phi);
  }
  return out;
}

namespace {

std::vector<double> add_constant_everywhere(const std::vector<double>& src, const SpectralField& cfield,
                                            int nt, int modes) {
  std::vector<double> out(src.size());
  for (int m = 0; m < nt; ++m)
    for (int i = 0; i < modes; ++i)
      out[static_cast<size_t>(m) * modes + i] =
          src[static_cast<size_t>(m) * modes + i] + cfield.coeffs[i];
  return out;
}

}  // namespace

LambdaTrajectory decompose_lambda(const SpectralField& y0, const SourceSpec& u, double c,
                                  const TimeGrid& grid) {
  if (!(c > 0.0)) throw std::invalid_argument("decompose_lambda: c must be > 0");
  y0.validate();
  const int modes = y0.total_modes();
  const int nt = grid.node_count();

  // Splitting of the initial data (nodal |.|, projected back to the band).
  NodalField y0n = from_spectral(y0);
  NodalField y01n = y0n, y02n = y0n;
  for (int j = 0; j < static_cast<int>(y0n.values.size()); ++j) {
    y01n.values[j] = y0n.values[j] + std::abs(y0n.values[j]);
    y02n.values[j] = std::abs(y0n.values[j]);
  }
  const SpectralField y01 = to_spectral(y01n, y0.mode_cap);
  const SpectralField y02 = to_spectral(y02n, y0.mode_cap);

  // Splitting of the source: u1 = u + |u| + c, u2 = |u| + c. Closed forms
  // where |u| is available exactly; nodal route otherwise.
  const auto u_coeffs = source_coefficients(u, y0.domain, y0.mode_cap, grid);
  const SpectralField cfield = constant_field(y0.domain, y0.mode_cap, c);
  std::vector<double> u1_coeffs, u2_coeffs;
  const bool positive_random = u.kind == SourceSpec::Kind::banded_random && u.bound_c > 0.0;
  if (u.kind == SourceSpec::Kind::zero) {
    u1_coeffs.assign(static_cast<size_t>(nt) * modes, 0.0);
    u1_coeffs = add_constant_everywhere(u1_coeffs, cfield, nt, modes);
    u2_coeffs = u1_coeffs;
  } else if (u.kind == SourceSpec::Kind::constant) {
    const SpectralField c1 = constant_field(y0.domain, y0.mode_cap, u.value + std::abs(u.value) + c);
    const SpectralField c2 = constant_field(y0.domain, y0.mode_cap, std::abs(u.value) + c);
    u1_coeffs.resize(static_cast<size_t>(nt) * modes);
    u2_coeffs.resize(static_cast<size_t>(nt) * modes);
    for (int m = 0; m < nt; ++m)
      for (int i = 0; i < modes; ++i) {
        u1_coeffs[static_cast<size_t>(m) * modes + i] = c1.coeffs[i];
        u2_coeffs[static_cast<size_t>(m) * modes + i] = c2.coeffs[i];
      }
  } else if (positive_random) {
    // Declared bounds give u >= c_b > 0, so |u| = u exactly.
    u1_coeffs.resize(u_coeffs.size());
    for (size_t i = 0; i < u_coeffs.size(); ++i) u1_coeffs[i] = 2.0 * u_coeffs[i];
    u1_coeffs = add_constant_everywhere(u1_coeffs, cfield, nt, modes);
    u2_coeffs = add_constant_everywhere(u_coeffs, cfield, nt, modes);
  } else {
    const auto u_samples = source_nodal(u, y0.domain, grid);
    const int nodes = y0.domain.total_nodes();
    u1_coeffs.resize(static_cast<size_t>(nt) * modes);
    u2_coeffs.resize(static_cast<size_t>(nt) * modes);
    NodalField slice;
    slice.domain = y0.domain;
    slice.values.resize(nodes);
    for (int m = 0; m < nt; ++m) {
      for (int j = 0; j < nodes; ++j)
        slice.values[j] = std::abs(u_samples[static_cast<size_t>(m) * nodes + j]);
      const SpectralField absm = to_spectral(slice, y0.mode_cap);
      for (int i = 0; i < modes; ++i) {
        const double base = u_coeffs[static_cast<size_t>(m) * modes + i];
        u1_coeffs[static_cast<size_t>(m) * modes + i] = base + absm.coeffs[i] + cfield.coeffs[i];
        u2_coeffs[static_cast<size_t>(m) * modes + i] = absm.coeffs[i] + cfield.coeffs[i];
      }
    }
  }

  LambdaTrajectory out;
  out.y = parabolic_evolve(y0, u_coeffs, grid, Method::duhamel);
  out.y1 = parabolic_evolve(y01, u1_coeffs, grid, Method::duhamel);
  out.y2 = parabolic_evolve(y02, u2_coeffs, grid, Method::duhamel);

  const auto lam = eigenvalue_table(y0.domain, y0.mode_cap);
  const double gamma = basis_volume(y0.domain);
  out.t.resize(nt);
  out.lambda1.resize(nt);
  out.lambda2.resize(nt);
  out.recon_residual.resize(nt);
  out.min_lambda = 1e300;
  double worst_linearity = 0.0;

  std::vector<double> phi1(modes), phi2(modes);
  for (int m = 0; m < nt; ++m) {
    const double t = grid.node(m);
    out.t[m] = t;
    double n_phi1 = 0.0, n_phi2 = 0.0, n_y = 0.0, n_y1 = 0.0, n_y2 = 0.0;
    const double* ym = out.y.node(m);
    const double* y1m = out.y1.node(m);
    const double* y2m = out.y2.node(m);
    for (int i = 0; i < modes; ++i) {
      const double e = std::exp(-lam[i] * t);
      phi1[i] = y01.coeffs[i] * e;
      phi2[i] = y02.coeffs[i] * e;
      n_phi1 += phi1[i] * phi1[i];
      n_phi2 += phi2[i] * phi2[i];
      n_y += ym[i] * ym[i];
      n_y1 += y1m[i] * y1m[i];
      n_y2 += y2m[i] * y2m[i];
    }
    n_phi1 = std::sqrt(gamma * n_phi1);
    n_phi2 = std::sqrt(gamma * n_phi2);
    n_y = std::sqrt(gamma * n_y);
    n_y1 = std::sqrt(gamma * n_y1);
    n_y2 = std::sqrt(gamma * n_y2);
    if (n_phi1 <= 0.0 || n_phi2 <= 0.0)
      throw std::domain_error("decompose_lambda: |phi_i(t)| vanished (band-limited y0_i is zero)");
    const double l1 = n_y1 / n_phi1;
    const double l2 = n_y2 / n_phi2;
    out.lambda1[m] = l1;
    out.lambda2[m] = l2;
    out.min_lambda = std::min({out.min_lambda, l1, l2});

    double recon = 0.0, lin = 0.0;
    for (int i = 0; i < modes; ++i) {
      const double dr = ym[i] - (l1 * phi1[i] - l2 * phi2[i]);
      const double dl = ym[i] - (y1m[i] - y2m[i]);
      recon += dr * dr;
      lin += dl * dl;
    }
    const double denom = std::max(n_y, 1e-30);
    out.recon_residual[m] = std::sqrt(gamma * recon) / denom;
    worst_linearity = std::max(worst_linearity, std::sqrt(gamma * lin) / denom);
  }
  out.linearity_residual = worst_linearity;
  return out;
}

L4Margins l4_comparison(const SpectralField& y0, const TimeGrid& grid, int psi_band) {
  y0.validate();
  const int d = y0.domain.dims;
  std::array<int, 3> band{1, 1, 1};
  for (int a = 0; a < d; ++a) {
    band[a] = psi_band > 0 ? psi_band : 4 * y0.mode_cap[a];
    if (d == 1) band[a] = std::max(band[a], 64);
  }

  // Quadrature/sampling grid: 4x the Psi band per axis.
  BoxDomain qdom = y0.domain;
  for (int a = 0; a < d; ++a) qdom.grid_points[a] = 4 * band[a];

  SpectralField y0q = y0;
  y0q.domain = qdom;
  NodalField phi0 = from_spectral(y0q);

  NodalField sq = phi0;
  for (double& v : sq.values) v = v * v;
  SpectralField psi0 = to_spectral(sq, band);

  const auto lam_psi = eigenvalue_table(qdom, band);
  const auto lam_y = eigenvalue_table(qdom, y0q.mode_cap);
  const double gamma = basis_volume(qdom);

  L4Margins out;
  double p_scale = 0.0;
  for (double v : phi0.values) p_scale = std::max(p_scale, v * v);
  out.pointwise_scale = std::max(p_scale, 1e-30);
  double psi0_sq = 0.0;
  for (double c : psi0.coeffs) psi0_sq += c * c;
  out.norm_scale = std::max(gamma * psi0_sq, 1e-30);

  out.t.resize(grid.node_count());
  out.norm_margin.resize(grid.node_count());
  out.min_pointwise = 0.0;  // t = 0 margin vanishes against the nodal squaring

  SpectralField psi_t = psi0;
  SpectralField phi_t = y0q;
  for (int m = 0; m <= grid.steps; ++m) {
    const double t = grid.node(m);
    out.t[m] = t;
    double norm_margin;
    if (m == 0) {
      double l4 = l4_norm(phi0);
      norm_margin = gamma * psi0_sq - l4 * l4 * l4 * l4;
    } else {
      for (size_t i = 0; i < psi_t.coeffs.size(); ++i)
        psi_t.coeffs[i] = psi0.coeffs[i] * std::exp(-lam_psi[i] * t);
      for (size_t i = 0; i < phi_t.coeffs.size(); ++i)
        phi_t.coeffs[i] = y0q.coeffs[i] * std::exp(-lam_y[i] * t);
      const NodalField psi_n = from_spectral(psi_t);
      const NodalField phi_n = from_spectral(phi_t);
      double mn = 1e300, psi_sq = 0.0, l4s = 0.0;
      for (size_t j = 0; j < psi_n.values.size(); ++j) {
        const double margin = psi_n.values[j] - phi_n.values[j] * phi_n.values[j];
        mn = std::min(mn, margin);
      }
      for (double cc : psi_t.coeffs) psi_sq += cc * cc;
      for (double v : phi_n.values) {
        const double v2 = v * v;
        l4s += v2 * v2;
      }
      norm_margin = gamma * psi_sq - qdom.node_weight() * l4s;
      out.min_pointwise = std::min(out.min_pointwise, mn);
    }
    out.norm_margin[m] = norm_margin;
    if (m == 0 || norm_margin < out.min_norm) out.min_norm = norm_margin;
  }
  return out;
}

MollificationResult source_mollification_study(const SourceSpec& u_rough,
                                               const std::vector<int>& levels,
                                               const SpectralField& y0, double c,
                                               const TimeGrid& grid) {
  if (u_rough.kind != SourceSpec::Kind::zero && u_rough.kind != SourceSpec::Kind::spectral &&
      u_rough.kind != SourceSpec::Kind::spectral_decay)
    throw std::invalid_argument("mollification: source must be a spectral series (or zero)");
  for (size_t i = 1; i < levels.size(); ++i)
    if (levels[i] <= levels[i - 1])
      throw std::invalid_argument("mollification: levels must be strictly increasing");

  MollificationResult out;
  const double gamma = basis_volume(y0.domain);
  std::vector<Trajectory> ys;
  std::vector<LambdaTrajectory> lts;
  for (int lev : levels) {
    SourceSpec trunc = u_rough;
    if (u_rough.kind == SourceSpec::Kind::spectral_decay) {
      trunc.band[0] = std::min(u_rough.band[0], lev);
    } else if (u_rough.kind == SourceSpec::Kind::spectral) {
      // Zero all coefficients with any axis index above the level.
      const int d = y0.domain.dims;
      std::array<int, 3> b = u_rough.band;
      for (int a = d; a < 3; ++a) b[a] = 1;
      const int c1 = d > 1 ? b[1] : 1, c2 = d > 2 ? b[2] : 1;
      for (int k0 = 0; k0 < b[0]; ++k0)
        for (int k1 = 0; k1 < c1; ++k1)
          for (int k2 = 0; k2 < c2; ++k2)
            if (k0 + 1 > lev || (d > 1 && k1 + 1 > lev) || (d > 2 && k2 + 1 > lev))
              trunc.coeffs[(static_cast<size_t>(k0) * c1 + k1) * c2 + k2] = 0.0;
    }
    LambdaTrajectory lt = decompose_lambda(y0, trunc, c, grid);

    MollificationLevel row;
    row.level = lev;
    row.lambda1_T = lt.lambda1.back();
    row.lambda2_T = lt.lambda2.back();
    if (!ys.empty()) {
      const Trajectory& prev = ys.back();
      double worst = 0.0;
      for (int m = 0; m <= grid.steps; ++m) {
        const double* a = lt.y.node(m);
        const double* b2 = prev.node(m);
        double s = 0.0;
        for (int i = 0; i < lt.y.modes(); ++i) {
          const double dd = a[i] - b2[i];
          s += dd * dd;
        }
        worst = std::max(worst, std::sqrt(gamma * s));
      }
      row.dist_prev = worst;
      const LambdaTrajectory& pl = lts.back();
      double ldiff = 0.0;
      for (int m = 0; m <= grid.steps; ++m)
        ldiff = std::max({ldiff, std::abs(lt.lambda1[m] - pl.lambda1[m]),
                          std::abs(lt.lambda2[m] - pl.lambda2[m])});
      row.lambda_diff_prev = ldiff;
    }
    ys.push_back(lt.y);
    lts.push_back(std::move(lt));
    out.levels.push_back(row);
  }
  return out;
}

}  // namespace pclab
