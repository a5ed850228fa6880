#include "pclab/ns.hpp"

#include <algorithm>
#include <cmath>

namespace pclab::ns {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

// out[b, r, a] = sum_c M[r, c] in[b, c, a]; the transformed axis has length
// cols on input and rows on output, with n_before/n_after blocks around it.
void apply_axis(const cplx* in, cplx* out, long n_before, int cols, long n_after, const cplx* M,
                int rows) {
  for (long b = 0; b < n_before; ++b) {
    const cplx* in_b = in + b * cols * n_after;
    cplx* out_b = out + b * rows * n_after;
    for (int r = 0; r < rows; ++r) {
      cplx* out_r = out_b + static_cast<long>(r) * n_after;
      std::fill(out_r, out_r + n_after, cplx(0.0, 0.0));
      const cplx* Mr = M + static_cast<long>(r) * cols;
      for (int c = 0; c < cols; ++c) {
        const cplx w = Mr[c];
        if (w == cplx(0.0, 0.0)) continue;
        const cplx* in_c = in_b + static_cast<long>(c) * n_after;
        for (long a = 0; a < n_after; ++a) out_r[a] += w * in_c[a];
      }
    }
  }
}

// Per-axis synthesis matrix E[j][m] = exp(i k_m x_j), x_j = 2pi j / N, and
// analysis matrix A[m][j] = exp(-i k_m x_j) / N. Exact inverses on the band
// as long as N > 2K.
std::vector<cplx> synth_matrix(int K, int N) {
  const int S = 2 * K + 1;
  std::vector<cplx> E(static_cast<size_t>(N) * S);
  for (int j = 0; j < N; ++j)
    for (int m = 0; m < S; ++m) {
      const double phase = kTwoPi * j * (m - K) / N;
      E[static_cast<size_t>(j) * S + m] = cplx(std::cos(phase), std::sin(phase));
    }
  return E;
}

std::vector<cplx> analysis_matrix(int K, int N) {
  const int S = 2 * K + 1;
  std::vector<cplx> A(static_cast<size_t>(S) * N);
  for (int m = 0; m < S; ++m)
    for (int j = 0; j < N; ++j) {
      const double phase = -kTwoPi * j * (m - K) / N;
      A[static_cast<size_t>(m) * N + j] = cplx(std::cos(phase) / N, std::sin(phase) / N);
    }
  return A;
}

// Scalar lattice component -> nodal values on the N^d grid (real part kept).
void to_grid(const PeriodicBox& box, const cplx* comp, int N, std::vector<cplx>& out,
             std::vector<cplx>& scratch) {
  const int S = box.side();
  const auto E = synth_matrix(box.K, N);
  long before = 1, after = 1;
  for (int a = 1; a < box.dims; ++a) after *= S;
  const cplx* src = comp;
  std::vector<cplx>* buf_a = &out;
  std::vector<cplx>* buf_b = &scratch;
  for (int axis = 0; axis < box.dims; ++axis) {
    buf_a->resize(before * static_cast<long>(N) * after);
    apply_axis(src, buf_a->data(), before, S, after, E.data(), N);
    src = buf_a->data();
    std::swap(buf_a, buf_b);
    before *= N;
    if (axis + 1 < box.dims) after /= S;
  }
  if (src != out.data()) out.assign(src, src + before);
  for (auto& v : out) v = cplx(v.real(), 0.0);
}

// Nodal values on the N^d grid -> lattice band (|k_i| <= K).
void from_grid(const PeriodicBox& box, const std::vector<cplx>& grid_vals, int N, cplx* comp,
               std::vector<cplx>& scratch_a, std::vector<cplx>& scratch_b) {
  const int S = box.side();
  const auto A = analysis_matrix(box.K, N);
  long before = 1, after = 1;
  for (int a = 1; a < box.dims; ++a) after *= N;
  const cplx* src = grid_vals.data();
  std::vector<cplx>* buf_a = &scratch_a;
  std::vector<cplx>* buf_b = &scratch_b;
  for (int axis = 0; axis < box.dims; ++axis) {
    buf_a->resize(before * static_cast<long>(S) * after);
    apply_axis(src, buf_a->data(), before, N, after, A.data(), S);
    src = buf_a->data();
    std::swap(buf_a, buf_b);
    before *= S;
    if (axis + 1 < box.dims) after /= N;
  }
  std::copy(src, src + before, comp);
}

long grid_size(const PeriodicBox& box, int N) {
  long n = 1;
  for (int a = 0; a < box.dims; ++a) n *= N;
  return n;
}

int default_quad_grid(const PeriodicBox& box, int requested, int multiple) {
  const int floor_n = multiple * box.K + 1;
  if (requested <= 0) return floor_n;
  if (requested < floor_n)
    throw std::invalid_argument("quadrature grid too coarse for alias-free evaluation");
  return requested;
}

// Convective term c = (u . grad u) analyzed back to the band, no projection.
void convective_term(const DivFreeField& u, int N, std::vector<cplx>& out) {
  const PeriodicBox& box = u.box;
  const long lat = box.lattice();
  const long gsz = grid_size(box, N);
  const int d = box.dims;

  std::vector<cplx> scratch_a, scratch_b, mode(lat);
  std::vector<std::vector<cplx>> vel(d), grad(static_cast<size_t>(d) * d);
  for (int c = 0; c < d; ++c) {
    vel[c].resize(gsz);
    to_grid(box, u.coeffs.data() + c * lat, N, vel[c], scratch_a);
  }
  for (int c = 0; c < d; ++c)
    for (int a = 0; a < d; ++a) {
      const cplx* comp = u.coeffs.data() + c * lat;
      for (long i = 0; i < lat; ++i) {
        const auto k = wavevector(box, i);
        mode[i] = cplx(0.0, 1.0) * static_cast<double>(k[a]) * comp[i];
      }
      auto& g = grad[static_cast<size_t>(c) * d + a];
      g.resize(gsz);
      to_grid(box, mode.data(), N, g, scratch_a);
    }

  out.assign(static_cast<size_t>(d) * lat, cplx(0.0, 0.0));
  std::vector<cplx> prod(gsz);
  for (int c = 0; c < d; ++c) {
    for (long i = 0; i < gsz; ++i) {
      double s = 0.0;
      for (int a = 0; a < d; ++a)
        s += vel[a][i].real() * grad[static_cast<size_t>(c) * d + a][i].real();
      prod[i] = cplx(s, 0.0);
    }
    from_grid(box, prod, N, out.data() + c * lat, scratch_a, scratch_b);
  }
}

double simpson(const std::vector<double>& f, double h) {
  const int n = static_cast<int>(f.size()) - 1;
  if (n < 1) return 0.0;
  if (n == 1) return 0.5 * h * (f[0] + f[1]);
  double total = 0.0;
  int even_part = n;
  if (n % 2 == 1) even_part = n - 3;
  for (int i = 0; i + 2 <= even_part; i += 2)
    total += h / 3.0 * (f[i] + 4.0 * f[i + 1] + f[i + 2]);
  if (n % 2 == 1) {
    const int i = even_part;
    total += 3.0 * h / 8.0 * (f[i] + 3.0 * f[i + 1] + 3.0 * f[i + 2] + f[i + 3]);
  }
  return total;
}

}  // namespace

void PeriodicBox::validate() const {
  if (dims != 2 && dims != 3) throw std::invalid_argument("PeriodicBox: dims must be 2 or 3");
  if (K < 1) throw std::invalid_argument("PeriodicBox: K must be >= 1");
}

long flat_index(const PeriodicBox& box, const std::array<int, 3>& k) {
  const int S = box.side();
  long idx = 0;
  for (int a = 0; a < box.dims; ++a) {
    if (k[a] < -box.K || k[a] > box.K) throw std::out_of_range("flat_index: |k_i| > K");
    idx = idx * S + (k[a] + box.K);
  }
  for (int a = box.dims; a < 3; ++a)
    if (k[a] != 0) throw std::out_of_range("flat_index: trailing component must be 0");
  return idx;
}

std::array<int, 3> wavevector(const PeriodicBox& box, long index) {
  const int S = box.side();
  std::array<int, 3> k{0, 0, 0};
  for (int a = box.dims - 1; a >= 0; --a) {
    k[a] = static_cast<int>(index % S) - box.K;
    index /= S;
  }
  return k;
}

void DivFreeField::validate() const {
  box.validate();
  if (coeffs.size() != static_cast<size_t>(box.dims) * box.lattice())
    throw std::invalid_argument("DivFreeField: coefficient count mismatch");
  for (const cplx& v : coeffs)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw std::invalid_argument("DivFreeField: non-finite coefficient");
}

DivFreeField zero_velocity(const PeriodicBox& box) {
  box.validate();
  DivFreeField f;
  f.box = box;
  f.coeffs.assign(static_cast<size_t>(box.dims) * box.lattice(), cplx(0.0, 0.0));
  return f;
}

void leray_project(DivFreeField& f) {
  const long lat = f.box.lattice();
  const int d = f.box.dims;
  for (long i = 0; i < lat; ++i) {
    const auto k = wavevector(f.box, i);
    double k2 = 0.0;
    for (int a = 0; a < d; ++a) k2 += static_cast<double>(k[a]) * k[a];
    if (k2 == 0.0) {
      for (int c = 0; c < d; ++c) f.coeffs[static_cast<size_t>(c) * lat + i] = cplx(0.0, 0.0);
      continue;
    }
    cplx dot(0.0, 0.0);
    for (int c = 0; c < d; ++c) dot += static_cast<double>(k[c]) * f.coeffs[static_cast<size_t>(c) * lat + i];
    dot /= k2;
    for (int c = 0; c < d; ++c) f.coeffs[static_cast<size_t>(c) * lat + i] -= static_cast<double>(k[c]) * dot;
  }
}

void hermitian_symmetrize(DivFreeField& f) {
  const long lat = f.box.lattice();
  const int d = f.box.dims;
  for (long i = 0; i < lat; ++i) {
    auto k = wavevector(f.box, i);
    std::array<int, 3> km{-k[0], -k[1], -k[2]};
    const long j = flat_index(f.box, km);
    if (j < i) continue;
    for (int c = 0; c < d; ++c) {
      cplx& a = f.coeffs[static_cast<size_t>(c) * lat + i];
      cplx& b = f.coeffs[static_cast<size_t>(c) * lat + j];
      const cplx avg = 0.5 * (a + std::conj(b));
      a = avg;
      b = std::conj(avg);
    }
  }
}

DivFreeField galerkin_truncate(const DivFreeField& f, int n) {
  if (n < 1) throw std::invalid_argument("galerkin_truncate: n must be >= 1");
  DivFreeField out = f;
  const long lat = f.box.lattice();
  for (long i = 0; i < lat; ++i) {
    const auto k = wavevector(f.box, i);
    bool keep = true;
    for (int a = 0; a < f.box.dims; ++a)
      if (std::abs(k[a]) > n) keep = false;
    if (keep) continue;
    for (int c = 0; c < f.box.dims; ++c)
      out.coeffs[static_cast<size_t>(c) * lat + i] = cplx(0.0, 0.0);
  }
  return out;
}

double divergence_defect(const DivFreeField& f) {
  const long lat = f.box.lattice();
  const int d = f.box.dims;
  double worst = 0.0;
  double scale2 = 0.0;
  for (long i = 0; i < lat; ++i) {
    const auto k = wavevector(f.box, i);
    cplx dot(0.0, 0.0);
    double mag2 = 0.0;
    for (int c = 0; c < d; ++c) {
      const cplx v = f.coeffs[static_cast<size_t>(c) * lat + i];
      dot += static_cast<double>(k[c]) * v;
      mag2 += std::norm(v);
    }
    worst = std::max(worst, std::abs(dot));
    scale2 = std::max(scale2, mag2);
  }
  return scale2 > 0.0 ? worst / std::sqrt(scale2) : 0.0;
}

double l2_norm(const DivFreeField& f) {
  double s = 0.0;
  for (const cplx& v : f.coeffs) s += std::norm(v);
  return std::sqrt(s * std::pow(kTwoPi, f.box.dims));
}

double h1_seminorm(const DivFreeField& f) {
  const long lat = f.box.lattice();
  double s = 0.0;
  for (long i = 0; i < lat; ++i) {
    const auto k = wavevector(f.box, i);
    double k2 = 0.0;
    for (int a = 0; a < f.box.dims; ++a) k2 += static_cast<double>(k[a]) * k[a];
    for (int c = 0; c < f.box.dims; ++c)
      s += k2 * std::norm(f.coeffs[static_cast<size_t>(c) * lat + i]);
  }
  return std::sqrt(s * std::pow(kTwoPi, f.box.dims));
}

double l4_norm(const DivFreeField& f, int grid_n) {
  const int N = default_quad_grid(f.box, grid_n, 4);
  const long lat = f.box.lattice();
  const long gsz = grid_size(f.box, N);
  std::vector<cplx> vals(gsz), scratch;
  std::vector<double> mag2(gsz, 0.0);
  for (int c = 0; c < f.box.dims; ++c) {
    to_grid(f.box, f.coeffs.data() + c * lat, N, vals, scratch);
    for (long i = 0; i < gsz; ++i) mag2[i] += vals[i].real() * vals[i].real();
  }
  double s = 0.0;
  for (long i = 0; i < gsz; ++i) s += mag2[i] * mag2[i];
  const double cell = std::pow(kTwoPi / N, f.box.dims);
  return std::pow(s * cell, 0.25);
}

double ladyzhenskaya_ratio(const DivFreeField& f, int grid_n) {
  if (f.box.dims != 3) throw std::invalid_argument("ladyzhenskaya_ratio: 3-D fields only");
  const double l2 = l2_norm(f);
  const double h1 = h1_seminorm(f);
  if (l2 == 0.0 || h1 == 0.0) throw std::invalid_argument("ladyzhenskaya_ratio: zero field");
  return l4_norm(f, grid_n) / (std::sqrt(2.0) * std::pow(l2, 0.25) * std::pow(h1, 0.75));
}

double trilinear_b(const DivFreeField& u, const DivFreeField& v, const DivFreeField& w,
                   int grid_n) {
  if (!u.box.same_as(v.box) || !u.box.same_as(w.box))
    throw std::invalid_argument("trilinear_b: box mismatch");
  const PeriodicBox& box = u.box;
  const int N = default_quad_grid(box, grid_n, 3);
  const long lat = box.lattice();
  const long gsz = grid_size(box, N);
  const int d = box.dims;

  std::vector<cplx> scratch, vals(gsz), mode(lat);
  std::vector<std::vector<cplx>> uu(d), ww(d);
  for (int c = 0; c < d; ++c) {
    uu[c].resize(gsz);
    to_grid(box, u.coeffs.data() + c * lat, N, uu[c], scratch);
    ww[c].resize(gsz);
    to_grid(box, w.coeffs.data() + c * lat, N, ww[c], scratch);
  }
  double total = 0.0;
  for (int j = 0; j < d; ++j)
    for (int a = 0; a < d; ++a) {
      const cplx* comp = v.coeffs.data() + j * lat;
      for (long i = 0; i < lat; ++i) {
        const auto k = wavevector(box, i);
        mode[i] = cplx(0.0, 1.0) * static_cast<double>(k[a]) * comp[i];
      }
      to_grid(box, mode.data(), N, vals, scratch);
      for (long i = 0; i < gsz; ++i) total += uu[a][i].real() * vals[i].real() * ww[j][i].real();
    }
  return total * std::pow(kTwoPi / N, d);
}

DivFreeField random_field(const PeriodicBox& box, Rng& rng) {
  DivFreeField f = zero_velocity(box);
  const long lat = box.lattice();
  const int d = box.dims;
  for (long i = 0; i < lat; ++i) {
    const auto k = wavevector(box, i);
    // Visit each conjugate pair once, from its lexicographically positive half.
    int lead = 0;
    for (int a = 0; a < d; ++a) {
      if (k[a] != 0) {
        lead = k[a];
        break;
      }
    }
    if (lead <= 0) continue;
    double k2 = 0.0;
    for (int a = 0; a < d; ++a) k2 += static_cast<double>(k[a]) * k[a];
    const double amp = 1.0 / (1.0 + k2);
    const long j = flat_index(box, {-k[0], -k[1], -k[2]});
    for (int c = 0; c < d; ++c) {
      const cplx z(amp * rng.uniform(-1.0, 1.0), amp * rng.uniform(-1.0, 1.0));
      f.coeffs[static_cast<size_t>(c) * lat + i] = z;
      f.coeffs[static_cast<size_t>(c) * lat + j] = std::conj(z);
    }
  }
  leray_project(f);
  const double n = l2_norm(f);
  if (n > 0.0)
    for (cplx& v : f.coeffs) v /= n;
  return f;
}

DivFreeField taylor_green_2d(int K) {
  PeriodicBox box;
  box.dims = 2;
  box.K = K;
  DivFreeField f = zero_velocity(box);
  const long lat = box.lattice();
  // u = (sin x cos y, -cos x sin y): modes (+-1, +-1), coefficients -+i/4.
  for (int sx : {1, -1})
    for (int sy : {1, -1}) {
      const long i = flat_index(box, {sx, sy, 0});
      f.coeffs[i] = cplx(0.0, -0.25 * sx);
      f.coeffs[lat + i] = cplx(0.0, 0.25 * sy);
    }
  return f;
}

DivFreeField taylor_green_3d(int K) {
  PeriodicBox box;
  box.dims = 3;
  box.K = K;
  DivFreeField f = zero_velocity(box);
  const long lat = box.lattice();
  // u = (sin x cos y cos z, -cos x sin y cos z, 0): modes (+-1, +-1, +-1).
  for (int sx : {1, -1})
    for (int sy : {1, -1})
      for (int sz : {1, -1}) {
        const long i = flat_index(box, {sx, sy, sz});
        f.coeffs[i] = cplx(0.0, -0.125 * sx);
        f.coeffs[lat + i] = cplx(0.0, 0.125 * sy);
      }
  return f;
}

DivFreeField GalerkinTrajectory::field_at(int m) const {
  if (m < 0 || m > grid.steps) throw std::out_of_range("GalerkinTrajectory: node index");
  DivFreeField f = zero_velocity(box);
  const size_t stride = f.coeffs.size();
  std::copy(coeffs.begin() + static_cast<size_t>(m) * stride,
            coeffs.begin() + (static_cast<size_t>(m) + 1) * stride, f.coeffs.begin());
  return f;
}

double GalerkinTrajectory::energy_at(int m) const {
  const size_t stride = static_cast<size_t>(box.dims) * box.lattice();
  double s = 0.0;
  for (size_t i = 0; i < stride; ++i) s += std::norm(coeffs[static_cast<size_t>(m) * stride + i]);
  return s * std::pow(kTwoPi, box.dims);
}

double GalerkinTrajectory::enstrophy_at(int m) const {
  const long lat = box.lattice();
  const size_t stride = static_cast<size_t>(box.dims) * lat;
  const cplx* y = coeffs.data() + static_cast<size_t>(m) * stride;
  double s = 0.0;
  for (long i = 0; i < lat; ++i) {
    const auto k = wavevector(box, i);
    double k2 = 0.0;
    for (int a = 0; a < box.dims; ++a) k2 += static_cast<double>(k[a]) * k[a];
    for (int c = 0; c < box.dims; ++c) s += k2 * std::norm(y[static_cast<size_t>(c) * lat + i]);
  }
  return s * std::pow(kTwoPi, box.dims);
}

GalerkinTrajectory ns_evolve(const DivFreeField& y0, double nu, const TimeGrid& grid,
                             const DivFreeField* forcing) {
  y0.validate();
  grid.validate();
  if (!(nu > 0.0)) throw std::invalid_argument("ns_evolve: nu must be positive");
  const PeriodicBox box = y0.box;
  const long lat = box.lattice();
  const int d = box.dims;
  const size_t stride = static_cast<size_t>(d) * lat;
  const int N = 3 * box.K + 1;
  const double h = grid.dt();

  std::vector<cplx> fhat;
  if (forcing) {
    if (!forcing->box.same_as(box)) throw std::invalid_argument("ns_evolve: forcing box mismatch");
    DivFreeField fproj = *forcing;
    leray_project(fproj);
    fhat = std::move(fproj.coeffs);
  }

  // Half-step and full-step viscous factors per mode.
  std::vector<double> E(lat), E2(lat);
  for (long i = 0; i < lat; ++i) {
    const auto k = wavevector(box, i);
    double k2 = 0.0;
    for (int a = 0; a < d; ++a) k2 += static_cast<double>(k[a]) * k[a];
    E[i] = std::exp(-0.5 * nu * k2 * h);
    E2[i] = E[i] * E[i];
  }

  DivFreeField state = y0;
  leray_project(state);

  GalerkinTrajectory traj;
  traj.box = box;
  traj.grid = grid;
  traj.nu = nu;
  traj.coeffs.resize(static_cast<size_t>(grid.steps + 1) * stride);
  std::copy(state.coeffs.begin(), state.coeffs.end(), traj.coeffs.begin());

  const double y0_norm = l2_norm(state);
  const double guard = 1e6 * std::max(y0_norm, 1e-300);

  DivFreeField work = state;
  std::vector<cplx> conv, n1(stride), n2(stride), n3(stride), n4(stride), tmp(stride);

  auto rhs = [&](const std::vector<cplx>& y, std::vector<cplx>& out) {
    work.coeffs = y;
    convective_term(work, N, conv);
    for (size_t i = 0; i < stride; ++i) out[i] = -conv[i];
    work.coeffs = std::move(out);
    leray_project(work);
    out = std::move(work.coeffs);
    if (!fhat.empty())
      for (size_t i = 0; i < stride; ++i) out[i] += fhat[i];
  };
  auto scale = [&](const std::vector<double>& fac, const std::vector<cplx>& in,
                   std::vector<cplx>& out) {
    for (int c = 0; c < d; ++c)
      for (long i = 0; i < lat; ++i)
        out[static_cast<size_t>(c) * lat + i] = fac[i] * in[static_cast<size_t>(c) * lat + i];
  };

  std::vector<cplx> y = state.coeffs;
  for (int m = 0; m < grid.steps; ++m) {
    rhs(y, n1);
    for (size_t i = 0; i < stride; ++i) tmp[i] = y[i] + 0.5 * h * n1[i];
    scale(E, tmp, tmp);
    rhs(tmp, n2);
    scale(E, y, tmp);
    for (size_t i = 0; i < stride; ++i) tmp[i] += 0.5 * h * n2[i];
    rhs(tmp, n3);
    scale(E, y, tmp);
    scale(E, tmp, tmp);
    std::vector<cplx> en3(stride);
    scale(E, n3, en3);
    for (size_t i = 0; i < stride; ++i) tmp[i] += h * en3[i];
    rhs(tmp, n4);

    for (int c = 0; c < d; ++c)
      for (long i = 0; i < lat; ++i) {
        const size_t idx = static_cast<size_t>(c) * lat + i;
        y[idx] = E2[i] * y[idx] +
                 h / 6.0 * (E2[i] * n1[idx] + 2.0 * E[i] * (n2[idx] + n3[idx]) + n4[idx]);
      }
    std::copy(y.begin(), y.end(), traj.coeffs.begin() + static_cast<size_t>(m + 1) * stride);

    double e = 0.0;
    for (size_t i = 0; i < stride; ++i) e += std::norm(y[i]);
    if (std::sqrt(e * std::pow(kTwoPi, d)) > guard)
      throw DivergenceError("ns_evolve: |y| exceeded 1e6 x |y0| at t = " +
                            std::to_string(grid.node(m + 1)));
  }
  return traj;
}

double energy_balance_residual(const GalerkinTrajectory& traj) {
  std::vector<double> enst(traj.grid.steps + 1);
  for (int m = 0; m <= traj.grid.steps; ++m) enst[m] = traj.enstrophy_at(m);
  const double dissipated = 2.0 * traj.nu * simpson(enst, traj.grid.dt());
  return std::abs(traj.energy_at(traj.grid.steps) - traj.energy_at(0) + dissipated);
}

double max_l4_over_time(const GalerkinTrajectory& traj) {
  double worst = 0.0;
  for (int m = 0; m <= traj.grid.steps; ++m)
    worst = std::max(worst, l4_norm(traj.field_at(m)));
  return worst;
}

UniquenessResult uniqueness_experiment(const DivFreeField& y0, double nu,
                                       const std::vector<int>& n_list, const TimeGrid& grid,
                                       const DivFreeField* forcing) {
  for (size_t i = 0; i + 1 < n_list.size(); ++i)
    if (n_list[i] >= n_list[i + 1])
      throw std::invalid_argument("uniqueness_experiment: n_list must be ascending");
  if (!n_list.empty() && n_list.back() > y0.box.K)
    throw std::invalid_argument("uniqueness_experiment: n exceeds mode radius");

  const GalerkinTrajectory ref = ns_evolve(y0, nu, grid, forcing);
  const size_t stride = static_cast<size_t>(y0.box.dims) * y0.box.lattice();
  const double vol = std::pow(kTwoPi, y0.box.dims);

  UniquenessResult res;
  res.reference_energy0 = ref.energy_at(0);
  res.max_l4 = max_l4_over_time(ref);

  for (int n : n_list) {
    const DivFreeField yn0 = galerkin_truncate(ref.field_at(0), n);
    const GalerkinTrajectory tn = ns_evolve(yn0, nu, grid, forcing);

    UniquenessRow row;
    row.n = n;
    row.d_series.resize(grid.steps + 1);
    double sup = 0.0, cmax = -1e300;
    double d0 = 0.0;
    for (int m = 0; m <= grid.steps; ++m) {
      double diff2 = 0.0;
      for (size_t i = 0; i < stride; ++i)
        diff2 += std::norm(ref.coeffs[static_cast<size_t>(m) * stride + i] -
                           tn.coeffs[static_cast<size_t>(m) * stride + i]);
      const double dm = std::sqrt(diff2 * vol);
      row.d_series[m] = dm;
      if (m == 0) d0 = dm;
      sup = std::max(sup, dm);
      if (m > 0 && d0 > 0.0 && dm > 0.0)
        cmax = std::max(cmax, std::log(dm * dm / (d0 * d0)) / grid.node(m));
    }
    row.gap0 = d0;
    row.d_sup = sup;
    row.c_defined = d0 > 0.0 && cmax > -1e300;
    row.c_fit = row.c_defined ? cmax : 0.0;
    res.rows.push_back(row);
  }
  return res;
}

}  // namespace pclab::ns
