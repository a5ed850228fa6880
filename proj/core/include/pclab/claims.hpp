#pragma once

#include <cstdint>
#include <vector>

#include "pclab/box.hpp"
#include "pclab/evolve.hpp"
#include "pclab/field.hpp"
#include "pclab/source.hpp"

namespace pclab {

// Normalized L2 distance between |phi| y and |y| phi; zero iff parallel.
double proportionality_residual(const SpectralField& y, const SpectralField& phi);

struct ProportionalityResult {
  std::vector<double> t;
  std::vector<double> r;
};

// r(t_m) along the trajectories of y (sourced) and phi (free).
ProportionalityResult proportionality_run(const SpectralField& y0, const SourceSpec& u,
                                          const TimeGrid& grid);

struct LambdaTrajectory {
  std::vector<double> t;
  std::vector<double> lambda1, lambda2;
  std::vector<double> recon_residual;   // |y - (l1 phi1 - l2 phi2)| / |y|, reported only
  double linearity_residual = 0.0;      // max_t |y - (y1 - y2)| / |y|, asserted
  double min_lambda = 0.0;
  // Trajectories retained for cross-level comparisons.
  Trajectory y, y1, y2;
};

// Positive/negative splitting u1 = u + |u| + c, u2 = |u| + c,
// y01 = y0 + |y0|, y02 = |y0| (nodal maps, projected back to the band);
// lambda_i(t) = |y_i(t)| / |phi_i(t)|.
LambdaTrajectory decompose_lambda(const SpectralField& y0, const SourceSpec& u, double c,
                                  const TimeGrid& grid);

struct L4Margins {
  double min_pointwise = 0.0;      // min over space-time of Psi - phi^2
  double min_norm = 0.0;           // min over nodes of |Psi(t)|^2 - |phi(t)|_L4^4
  double pointwise_scale = 1.0;    // |y0|_inf^2
  double norm_scale = 1.0;         // |Psi(0)|_L2^2
  std::vector<double> t;
  std::vector<double> norm_margin;
};

// Psi = heat flow of y0^2 (nodal squaring on a 4x-band grid, then projection);
// the t = 0 pointwise margin is evaluated against the nodal squaring itself.
L4Margins l4_comparison(const SpectralField& y0, const TimeGrid& grid, int psi_band = 0);

struct MollificationLevel {
  int level = 0;
  double lambda1_T = 0.0, lambda2_T = 0.0;
  double dist_prev = 0.0;       // sup_t |y_n(t) - y_prev(t)|
  double lambda_diff_prev = 0.0;
};

struct MollificationResult {
  std::vector<MollificationLevel> levels;
};

// decompose_lambda per mode-truncation level of the rough source; reports
// Cauchy distances between consecutive levels.
MollificationResult source_mollification_study(const SourceSpec& u_rough,
                                               const std::vector<int>& levels,
                                               const SpectralField& y0, double c,
                                               const TimeGrid& grid);

}  // namespace pclab
