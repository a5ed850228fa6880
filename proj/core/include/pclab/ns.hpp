#pragma once

// Divergence-free Fourier-Galerkin Navier-Stokes on the periodic box
// [0, 2pi]^d, d in {2, 3}. Velocity fields are stored as complex Fourier
// coefficients on the full cube lattice |k_i| <= K (the k = 0 slot is kept
// but pinned to zero), with the reality constraint u_{-k} = conj(u_k).
// Quadratic terms are evaluated pseudo-spectrally on an alias-free grid of
// 3K + 1 points per axis; L4 quantities use 4K + 1.

#include <array>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include "pclab/box.hpp"
#include "pclab/rng.hpp"

namespace pclab::ns {

using cplx = std::complex<double>;

struct PeriodicBox {
  int dims = 3;
  int K = 4;

  void validate() const;
  int side() const { return 2 * K + 1; }
  long lattice() const {
    long n = 1;
    for (int a = 0; a < dims; ++a) n *= side();
    return n;
  }
  bool same_as(const PeriodicBox& o) const { return dims == o.dims && K == o.K; }
};

// Flat lattice index of wavevector k (each |k_i| <= K), row-major with the
// last axis fastest; unused trailing components must be 0.
long flat_index(const PeriodicBox& box, const std::array<int, 3>& k);
std::array<int, 3> wavevector(const PeriodicBox& box, long index);

struct DivFreeField {
  PeriodicBox box;
  // Component c of mode k lives at coeffs[c * lattice + flat_index(k)].
  std::vector<cplx> coeffs;

  void validate() const;
};

DivFreeField zero_velocity(const PeriodicBox& box);

// Projects onto divergence-free, mean-zero fields: u_k -> u_k - k (k.u_k)/|k|^2.
void leray_project(DivFreeField& f);

// Enforces u_{-k} = conj(u_k) by averaging the pair.
void hermitian_symmetrize(DivFreeField& f);

// Zeroes every mode with any |k_i| > n.
DivFreeField galerkin_truncate(const DivFreeField& f, int n);

// max_k |k . u_k| relative to the largest mode magnitude (per-mode
// normalization would amplify roundoff dust in modes that should vanish).
double divergence_defect(const DivFreeField& f);

double l2_norm(const DivFreeField& f);       // sqrt((2pi)^d sum |u_k|^2)
double h1_seminorm(const DivFreeField& f);   // sqrt((2pi)^d sum |k|^2 |u_k|^2)
// L4 norm of the vector magnitude by nodal quadrature; grid_n = 0 picks the
// alias-free default 4K + 1.
double l4_norm(const DivFreeField& f, int grid_n = 0);

// rho(v) = ||v||_L4 / (2^{1/2} |v|_L2^{1/4} ||grad v||_L2^{3/4}), 3-D only.
double ladyzhenskaya_ratio(const DivFreeField& f, int grid_n = 0);

// b(u, v, w) = integral (u . grad v) . w, exact quadrature on >= 3K+1 nodes.
double trilinear_b(const DivFreeField& u, const DivFreeField& v, const DivFreeField& w,
                   int grid_n = 0);

// Hermitian white-in-band draw with amplitude (1 + |k|^2)^{-1}, Leray
// projected and normalized to unit L2 norm. Deterministic in the rng state.
DivFreeField random_field(const PeriodicBox& box, Rng& rng);

DivFreeField taylor_green_2d(int K);
DivFreeField taylor_green_3d(int K);

struct DivergenceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct GalerkinTrajectory {
  PeriodicBox box;
  TimeGrid grid;
  double nu = 0.0;
  std::vector<cplx> coeffs;  // (steps + 1) x dims x lattice, flattened

  DivFreeField field_at(int m) const;
  double energy_at(int m) const;     // |y(t_m)|^2 in L2
  double enstrophy_at(int m) const;  // ||grad y(t_m)||^2
};

// Integrating-factor RK4 for dy/dt = -nu |k|^2 y - P(y . grad y) + f.
// The viscous factor is exact per step; f (optional) is time-constant and
// Leray-projected on ingestion. Throws DivergenceError when |y| exceeds
// 1e6 |y0|.
GalerkinTrajectory ns_evolve(const DivFreeField& y0, double nu, const TimeGrid& grid,
                             const DivFreeField* forcing = nullptr);

// | |y(T)|^2 - |y(0)|^2 + 2 nu int_0^T ||grad y||^2 dt | with composite
// Simpson quadrature. Meaningful for unforced runs.
double energy_balance_residual(const GalerkinTrajectory& traj);

double max_l4_over_time(const GalerkinTrajectory& traj);

struct UniquenessRow {
  int n = 0;
  double gap0 = 0.0;    // |y0 - y0^(n)|
  double d_sup = 0.0;   // sup_t |y(t) - y^(n)(t)|
  double c_fit = 0.0;   // smallest C with D(t)^2 <= e^{Ct} D(0)^2 at grid nodes
  bool c_defined = false;
  std::vector<double> d_series;  // D(t_m) per time node
};

struct UniquenessResult {
  std::vector<UniquenessRow> rows;
  double reference_energy0 = 0.0;
  double max_l4 = 0.0;  // sup_t ||y(t)||_L4 along the reference trajectory
};

// Reference run at full radius K versus runs with truncated initial data
// (full-K dynamics), per n in n_list.
UniquenessResult uniqueness_experiment(const DivFreeField& y0, double nu,
                                       const std::vector<int>& n_list, const TimeGrid& grid,
                                       const DivFreeField* forcing = nullptr);

}  // namespace pclab::ns
