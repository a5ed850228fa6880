#pragma once

#include <array>
#include <string>
#include <vector>

#include "pclab/box.hpp"
#include "pclab/evolve.hpp"
#include "pclab/field.hpp"
#include "pclab/source.hpp"

namespace pclab {

// Iteration driver for the monotone source sequence: starting from
// v_1 = eps * u, each step solves Psi_{v_k}, searches a spline family for an
// admissible weight beta (positive, max at T, global derivative bound A,
// strict in-window decrease bound N), and takes
// v_{k+1} = max((|Psi_k| u + beta' w) / |y(T)|, v_k).
struct VSeqConfig {
  BoxDomain domain;                 // 1-D
  std::array<int, 3> mode_cap{64, 1, 1};
  TimeGrid grid{1.0, 512};
  SpectralField y0;
  SourceSpec u;                     // must declare bounds 0 < c <= u <= M
  double eps = 0.5;
  std::array<double, 2> omega_frac{0.25, 0.75};   // omega = (f0 L, f1 L)
  std::array<double, 2> window_frac{0.25, 0.75};  // I = (f0 T, f1 T)
  int iterations = 10;
  // Feasibility search ladder: drop-slope scale x rise headroom.
  std::array<double, 3> kappa{1.12, 1.30, 1.55};
  std::array<double, 3> headroom{1.25, 1.60, 2.10};
};

struct VSeqIteration {
  int k = 0;
  bool accepted = false;
  std::string rejection;            // violated inequality name when not accepted
  double s_k = 0.0;                 // max nodal |Psi_{k-1}| y(T) - |y(T)| Psi_k(T)
  double dv_norm = 0.0;             // L2(Omega x (0,T)) of v_k - v_{k-1}
  double psi_norm = 0.0;            // |Psi_{v_k}(T)|
  double mono_min = 0.0;            // min nodal v_k - v_{k-1}
  double pin_error = 0.0;           // max |v_k - eps u| on omega x I
  double beta_drop = 0.0, beta_rise = 0.0;
};

struct VSeqResult {
  std::vector<VSeqIteration> iterations;
  int accepted_count = 0;
  std::string exhaustion;           // inequality name when the family ran out
  double y_T_norm = 0.0;
  double sup_w = 0.0, inf_w_window = 0.0;
  double final_prop_residual = 0.0; // r(Psi_{v_K}(T), y(T))
  double v_min = 0.0, v_max = 0.0;
  double u_max = 0.0;
};

VSeqResult v_sequence_run(const VSeqConfig& cfg);

// Diagnostic agreement between two runs (refined = doubled band and steps,
// same nodal observation grid): max |s_k| difference over common accepted steps.
double v_sequence_ladder_agreement(const VSeqConfig& base_cfg);

}  // namespace pclab
