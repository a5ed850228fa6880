#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "pclab/beta.hpp"
#include "pclab/box.hpp"
#include "pclab/evolve.hpp"
#include "pclab/field.hpp"
#include "pclab/source.hpp"

namespace pclab {

// Thrown when a hypothesis (type invariant) is violated; distinguishes
// "hypothesis fails" from "claim fails".
struct PreconditionError : std::runtime_error {
  std::vector<std::string> violations;
  explicit PreconditionError(std::vector<std::string> v)
      : std::runtime_error(v.empty() ? "precondition violated" : v.front()), violations(std::move(v)) {}
};

// w solves w_t - laplace w = g with w(0) = w0 >= 0, g >= 0.
struct SupersolutionSpec {
  SpectralField w0;
  SourceSpec g;
};

struct MaxPrincipleResult {
  SpectralField z_T;
  double max_nodal_z_T = 0.0;
  // max(|z0|_inf, max_t |beta'(t)| * |w(t)|_inf): the size of the data the
  // sign bound is measured against.
  double scale = 0.0;
};

// Evolve w, then z with source -beta'(t) w(x, t); return z(T) and its
// maximum nodal value. Throws PreconditionError when beta/w/z0 violate
// their invariants.
MaxPrincipleResult max_principle_experiment(const BetaProfile& beta, const SupersolutionSpec& w_spec,
                                            const SpectralField& z0, const TimeGrid& grid);

struct SuiteCase {
  int index = 0;
  int dims = 1;
  double T = 0.0;
  double L0 = 0.0, L1 = 0.0;
  double max_z_T = 0.0;
  double scale = 0.0;
  double ratio = 0.0;            // max_z_T / scale
  double ladder_agreement = 0.0; // |z_T - z_T_refined| at base nodes / scale
};

struct SuiteResult {
  std::vector<SuiteCase> cases;
  double worst_ratio = 0.0;
  double worst_ladder = 0.0;
};

// Randomized admissible (beta, w, z0) families; every case is re-run at
// doubled space and time resolution and compared at the base grid's nodes
// (the raw one-sided maximum does not converge between grids).
SuiteResult max_principle_suite(int cases_1d, int cases_2d, uint64_t seed);

}  // namespace pclab
