#include "pclab/maxprin.hpp"

#include <algorithm>
#include <cmath>

#include "pclab/rng.hpp"
#include "pclab/transform.hpp"

namespace pclab {

namespace {

double nodal_abs_max(const SpectralField& f) {
  const NodalField n = from_spectral(f);
  double mx = 0.0;
  for (double v : n.values) mx = std::max(mx, std::abs(v));
  return mx;
}

double nodal_min(const SpectralField& f) {
  const NodalField n = from_spectral(f);
  double mn = n.values.empty() ? 0.0 : n.values[0];
  for (double v : n.values) mn = std::min(mn, v);
  return mn;
}

double nodal_max(const SpectralField& f) {
  const NodalField n = from_spectral(f);
  double mx = n.values.empty() ? 0.0 : n.values[0];
  for (double v : n.values) mx = std::max(mx, v);
  return mx;
}

}  // namespace

MaxPrincipleResult max_principle_experiment(const BetaProfile& beta, const SupersolutionSpec& w_spec,
                                            const SpectralField& z0, const TimeGrid& grid) {
  std::vector<std::string> bad = beta.violations();

  const double w0_scale = std::max(nodal_abs_max(w_spec.w0), 1e-30);
  if (nodal_min(w_spec.w0) < -1e-12 * w0_scale)
    bad.push_back("w0 must be nonnegative");

  const auto g_samples = source_nodal(w_spec.g, w_spec.w0.domain, grid);
  double g_min = 0.0, g_scale = 0.0;
  for (double v : g_samples) {
    g_min = std::min(g_min, v);
    g_scale = std::max(g_scale, std::abs(v));
  }
  if (g_min < -1e-12 * std::max(g_scale, 1e-30))
    bad.push_back("supersolution source g must be nonnegative");

  const double z0_scale = std::max(nodal_abs_max(z0), 1e-30);
  if (nodal_max(z0) > 1e-12 * z0_scale)
    bad.push_back("z0 must be nonpositive");

  if (!bad.empty()) throw PreconditionError(std::move(bad));

  const Trajectory w = parabolic_evolve(w_spec.w0, w_spec.g, grid, Method::duhamel);

  const int modes = w.modes();
  const int nt = grid.node_count();
  std::vector<double> src_z(static_cast<size_t>(nt) * modes);
  std::vector<double> bprime(nt);
  double w_inf_scale = 0.0;
  for (int m = 0; m < nt; ++m) {
    bprime[m] = beta.derivative(grid.node(m));
    const double* wm = w.node(m);
    for (int i = 0; i < modes; ++i)
      src_z[static_cast<size_t>(m) * modes + i] = -bprime[m] * wm[i];
    w_inf_scale = std::max(w_inf_scale, std::abs(bprime[m]) * nodal_abs_max(w.field_at(m)));
  }

  const Trajectory z = parabolic_evolve(z0, src_z, grid, Method::duhamel);

  MaxPrincipleResult out;
  out.z_T = z.field_at(grid.steps);
  out.max_nodal_z_T = nodal_max(out.z_T);
  out.scale = std::max({nodal_abs_max(z0), w_inf_scale, 1e-30});
  return out;
}

namespace {

struct DrawnCase {
  int dims = 1;
  double L[2] = {0, 0};
  double T = 0;
  double b0 = 0, dip = 0, gap = 0;
  double alpha = 0, alpha2 = 0;
  double gbar = 0;
  double a1 = 0;
  bool z_zero = false;
};

BetaProfile case_beta(const DrawnCase& c) {
  const double T = c.T;
  return BetaProfile({0.0, 0.3 * T, 0.55 * T, 0.8 * T, T},
                     {c.b0, c.b0 - c.dip, c.b0 - 0.3 * c.dip, c.b0 + 0.5 * c.gap, c.b0 + c.gap}, T);
}

DrawnCase draw_case(Rng& rng, int dims) {
  for (;;) {
    DrawnCase c;
    c.dims = dims;
    for (int a = 0; a < dims; ++a) c.L[a] = rng.uniform(1.0, M_PI);
    c.T = rng.uniform(0.5, 1.5);
    c.b0 = rng.uniform(0.5, 2.0);
    c.dip = rng.uniform(0.2, 1.0) * c.b0 * 0.5;
    c.gap = rng.uniform(0.15, 0.5) * c.b0;
    c.alpha = rng.uniform(0.5, 2.0);
    c.alpha2 = rng.uniform(0.0, 0.5) * c.alpha * 0.5;
    c.gbar = rng.uniform(0.0, 1.0);
    c.a1 = rng.uniform(0.0, 1.0);
    c.z_zero = rng.uniform() < 0.2;
    if (case_beta(c).violations().empty()) return c;  // spline wiggle may break max-at-T
  }
}

struct CaseSolution {
  std::vector<double> z_T_at_obs;
  double own_grid_max = 0.0;
  double scale = 0.0;
};

// Solve one drawn case at the given resolution and sample z(T) at the
// observation nodes (the fixed observation operator of the ladder).
CaseSolution solve_case(const DrawnCase& c, int steps, int cap1d, int grid1d,
                        const std::array<std::vector<double>, 3>& obs, bool want_scale) {
  BoxDomain dom;
  dom.dims = c.dims;
  for (int a = 0; a < c.dims; ++a) {
    dom.lengths[a] = c.L[a];
    dom.grid_points[a] = grid1d;
  }
  std::array<int, 3> cap{cap1d, c.dims > 1 ? cap1d : 1, 1};
  TimeGrid grid{c.T, steps};

  SpectralField w0 = zero_field(dom, cap);
  SpectralField z0 = zero_field(dom, cap);
  if (c.dims == 1) {
    w0.coeffs[0] = c.alpha;
    w0.coeffs[1] = c.alpha2;
    if (!c.z_zero) z0.coeffs[0] = -c.a1;
  } else {
    w0.coeffs[0] = c.alpha;                 // mode (1,1)
    w0.coeffs[cap[1]] = c.alpha2;           // mode (2,1)
    if (!c.z_zero) z0.coeffs[0] = -c.a1;
  }

  SourceSpec g;
  g.kind = SourceSpec::Kind::constant;
  g.value = c.gbar;

  const BetaProfile beta = case_beta(c);
  const Trajectory w = parabolic_evolve(w0, g, grid, Method::duhamel);

  const int modes = w.modes();
  const int nt = grid.node_count();
  std::vector<double> src_z(static_cast<size_t>(nt) * modes);
  double winf = 0.0;
  for (int m = 0; m < nt; ++m) {
    const double bp = beta.derivative(grid.node(m));
    const double* wm = w.node(m);
    for (int i = 0; i < modes; ++i)
      src_z[static_cast<size_t>(m) * modes + i] = -bp * wm[i];
    if (want_scale) winf = std::max(winf, std::abs(bp) * nodal_abs_max(w.field_at(m)));
  }

  const Trajectory z = parabolic_evolve(z0, src_z, grid, Method::duhamel);
  const SpectralField z_T = z.field_at(grid.steps);

  CaseSolution sol;
  sol.z_T_at_obs = synth_at(z_T, obs);
  sol.own_grid_max = nodal_max(z_T);
  if (want_scale) sol.scale = std::max({nodal_abs_max(z0), winf, 1e-30});
  return sol;
}

}  // namespace

SuiteResult max_principle_suite(int cases_1d, int cases_2d, uint64_t seed) {
  SuiteResult res;
  Rng rng(seed);
  int index = 0;

  auto run_block = [&](int count, int dims) {
    const int steps = 384, cap = dims == 1 ? 32 : 12, grid = dims == 1 ? 256 : 48;
    for (int i = 0; i < count; ++i) {
      const DrawnCase c = draw_case(rng, dims);
      BoxDomain base_dom;
      base_dom.dims = dims;
      for (int a = 0; a < dims; ++a) {
        base_dom.lengths[a] = c.L[a];
        base_dom.grid_points[a] = grid;
      }
      std::array<std::vector<double>, 3> obs;
      for (int a = 0; a < dims; ++a) obs[a] = axis_nodes(base_dom, a);

      const CaseSolution base = solve_case(c, steps, cap, grid, obs, true);
      const CaseSolution fine = solve_case(c, 2 * steps, 2 * cap, 2 * grid, obs, false);

      double agree = 0.0;
      for (size_t j = 0; j < base.z_T_at_obs.size(); ++j)
        agree = std::max(agree, std::abs(base.z_T_at_obs[j] - fine.z_T_at_obs[j]));

      SuiteCase row;
      row.index = index++;
      row.dims = dims;
      row.T = c.T;
      row.L0 = c.L[0];
      row.L1 = dims > 1 ? c.L[1] : 0.0;
      row.max_z_T = base.own_grid_max;
      row.scale = base.scale;
      row.ratio = base.own_grid_max / base.scale;
      row.ladder_agreement = agree / base.scale;
      res.cases.push_back(row);
      res.worst_ratio = std::max(res.worst_ratio, row.ratio);
      res.worst_ladder = std::max(res.worst_ladder, row.ladder_agreement);
    }
  };

  res.worst_ratio = -1e300;
  run_block(cases_1d, 1);
  run_block(cases_2d, 2);
  return res;
}

}  // namespace pclab
