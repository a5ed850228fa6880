#pragma once

#include <vector>

namespace pclab {

// Natural cubic spline through (t_i, y_i); C2 interior, zero second
// derivative at the ends. Evaluation outside [t_0, t_n] clamps to the
// boundary segment's polynomial.
class CubicSpline {
 public:
  CubicSpline(std::vector<double> ts, std::vector<double> ys);

  double value(double t) const;
  double derivative(double t) const;

  double t_min() const { return ts_.front(); }
  double t_max() const { return ts_.back(); }

 private:
  int segment(double t) const;

  std::vector<double> ts_;
  std::vector<double> a_, b_, c_, d_;  // per-segment cubic coefficients
};

}  // namespace pclab
