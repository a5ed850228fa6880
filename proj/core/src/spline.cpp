#include "pclab/spline.hpp"

#include <algorithm>
#include <stdexcept>

namespace pclab {

CubicSpline::CubicSpline(std::vector<double> ts, std::vector<double> ys)
    : ts_(std::move(ts)), a_(std::move(ys)) {
  const int n = static_cast<int>(ts_.size()) - 1;
  if (n < 1 || a_.size() != ts_.size())
    throw std::invalid_argument("CubicSpline: need >= 2 knots, matching values");
  for (int i = 0; i < n; ++i)
    if (!(ts_[i + 1] > ts_[i]))
      throw std::invalid_argument("CubicSpline: knots must be strictly increasing");

  std::vector<double> h(n);
  for (int i = 0; i < n; ++i) h[i] = ts_[i + 1] - ts_[i];

  // Tridiagonal system for interior second-derivative unknowns (natural ends).
  c_.assign(n + 1, 0.0);
  if (n > 1) {
    std::vector<double> diag(n - 1), rhs(n - 1), upper(n - 1);
    for (int i = 1; i < n; ++i) {
      diag[i - 1] = 2.0 * (h[i - 1] + h[i]);
      rhs[i - 1] = 3.0 * ((a_[i + 1] - a_[i]) / h[i] - (a_[i] - a_[i - 1]) / h[i - 1]);
      upper[i - 1] = h[i];
    }
    for (int i = 1; i < n - 1; ++i) {
      const double w = h[i] / diag[i - 1];
      diag[i] -= w * upper[i - 1];
      rhs[i] -= w * rhs[i - 1];
    }
    for (int i = n - 2; i >= 0; --i) {
      double v = rhs[i];
      if (i + 1 < n - 1) v -= upper[i] * c_[i + 2];
      c_[i + 1] = v / diag[i];
    }
  }

  b_.assign(n, 0.0);
  d_.assign(n, 0.0);
  for (int i = 0; i < n; ++i) {
    b_[i] = (a_[i + 1] - a_[i]) / h[i] - h[i] * (2.0 * c_[i] + c_[i + 1]) / 3.0;
    d_[i] = (c_[i + 1] - c_[i]) / (3.0 * h[i]);
  }
}

int CubicSpline::segment(double t) const {
  const int n = static_cast<int>(ts_.size()) - 1;
  if (t <= ts_.front()) return 0;
  if (t >= ts_.back()) return n - 1;
  const int i = static_cast<int>(std::upper_bound(ts_.begin(), ts_.end(), t) - ts_.begin()) - 1;
  return std::min(std::max(i, 0), n - 1);
}

double CubicSpline::value(double t) const {
  const int i = segment(t);
  const double x = t - ts_[i];
  return a_[i] + x * (b_[i] + x * (c_[i] + x * d_[i]));
}

double CubicSpline::derivative(double t) const {
  const int i = segment(t);
  const double x = t - ts_[i];
  return b_[i] + x * (2.0 * c_[i] + 3.0 * x * d_[i]);
}

}  // namespace pclab
