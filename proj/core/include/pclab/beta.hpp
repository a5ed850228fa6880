#pragma once

#include <string>
#include <vector>

#include "pclab/spline.hpp"

namespace pclab {

// C1 weight on [0, T], positive, maximum attained at t = T. Admissibility is
// checked by dense sampling (>= 1000 points per the type contract).
struct BetaProfile {
  CubicSpline spline;
  double horizon;

  BetaProfile(std::vector<double> ts, std::vector<double> ys, double T)
      : spline(std::move(ts), std::move(ys)), horizon(T) {}

  double value(double t) const { return spline.value(t); }
  double derivative(double t) const { return spline.derivative(t); }

  // Violated-invariant names; empty when admissible.
  std::vector<std::string> violations(int samples = 2001) const {
    std::vector<std::string> bad;
    const double end = value(horizon);
    bool positive = true, max_at_end = true;
    for (int i = 0; i <= samples; ++i) {
      const double t = horizon * i / samples;
      const double v = value(t);
      if (!(v > 0.0)) positive = false;
      if (v > end + 1e-12) max_at_end = false;
    }
    if (!positive) bad.push_back("beta must be positive on [0, T]");
    if (!max_at_end) bad.push_back("beta must attain its maximum at t = T");
    return bad;
  }
};

}  // namespace pclab
