#include "pclab/transform.hpp"

#include <cmath>
#include <stdexcept>

namespace pclab {

namespace {

// Apply an m x n matrix along one axis of a tensor stored row-major
// (last axis fastest); the axis extent changes from n to m.
std::vector<double> apply_axis(const std::vector<double>& in, std::array<int, 3> shape, int axis,
                               const std::vector<double>& mat, int m, int n) {
  int outer = 1, inner = 1;
  for (int a = 0; a < axis; ++a) outer *= shape[a];
  for (int a = axis + 1; a < 3; ++a) inner *= shape[a];
  std::vector<double> out(static_cast<size_t>(outer) * m * inner, 0.0);
  for (int o = 0; o < outer; ++o)
    for (int r = 0; r < m; ++r) {
      double* dst = out.data() + (static_cast<size_t>(o) * m + r) * inner;
      const double* mrow = mat.data() + static_cast<size_t>(r) * n;
      for (int c = 0; c < n; ++c) {
        const double* src = in.data() + (static_cast<size_t>(o) * n + c) * inner;
        const double w = mrow[c];
        if (w == 0.0) continue;
        for (int i = 0; i < inner; ++i) dst[i] += w * src[i];
      }
    }
  return out;
}

// rows x cols sine table: entry (r, c) = sin((r+1)(c+1) pi / (n+1)) scaled.
std::vector<double> sine_matrix(int rows, int cols, int n_plus_1, double scale) {
  std::vector<double> mat(static_cast<size_t>(rows) * cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c)
      mat[static_cast<size_t>(r) * cols + c] =
          scale * std::sin((r + 1.0) * (c + 1.0) * M_PI / n_plus_1);
  return mat;
}

}  // namespace

std::vector<double> axis_nodes(const BoxDomain& domain, int axis) {
  const int n = domain.grid_points[axis];
  std::vector<double> xs(n);
  for (int j = 0; j < n; ++j) xs[j] = (j + 1) * domain.lengths[axis] / (n + 1);
  return xs;
}

SpectralField to_spectral(const NodalField& f, const std::array<int, 3>& mode_cap) {
  f.validate();
  const int d = f.domain.dims;
  std::array<int, 3> cap = mode_cap;
  for (int a = d; a < 3; ++a) cap[a] = 1;
  for (int a = 0; a < d; ++a) {
    if (cap[a] < 1) throw std::invalid_argument("to_spectral: mode_cap must be >= 1");
    if (cap[a] > f.domain.grid_points[a])
      throw std::invalid_argument("to_spectral: mode_cap exceeds grid_points");
  }
  std::array<int, 3> shape{1, 1, 1};
  for (int a = 0; a < d; ++a) shape[a] = f.domain.grid_points[a];
  std::vector<double> work = f.values;
  for (int a = 0; a < d; ++a) {
    const int n = f.domain.grid_points[a];
    // Analysis factor 2/(n+1) from the discrete orthogonality relation.
    const auto mat = sine_matrix(cap[a], n, n + 1, 2.0 / (n + 1));
    work = apply_axis(work, shape, a, mat, cap[a], n);
    shape[a] = cap[a];
  }
  SpectralField out;
  out.domain = f.domain;
  out.mode_cap = cap;
  out.coeffs = std::move(work);
  return out;
}

NodalField from_spectral(const SpectralField& c) {
  c.validate();
  const int d = c.domain.dims;
  std::array<int, 3> shape{1, 1, 1};
  for (int a = 0; a < d; ++a) shape[a] = c.mode_cap[a];
  std::vector<double> work = c.coeffs;
  for (int a = 0; a < d; ++a) {
    const int n = c.domain.grid_points[a];
    const auto mat = sine_matrix(n, c.mode_cap[a], n + 1, 1.0);
    work = apply_axis(work, shape, a, mat, n, c.mode_cap[a]);
    shape[a] = n;
  }
  NodalField out;
  out.domain = c.domain;
  out.values = std::move(work);
  return out;
}

std::vector<double> synth_at(const SpectralField& c, const std::array<std::vector<double>, 3>& points) {
  c.validate();
  const int d = c.domain.dims;
  std::array<int, 3> shape{1, 1, 1};
  for (int a = 0; a < d; ++a) shape[a] = c.mode_cap[a];
  std::vector<double> work = c.coeffs;
  for (int a = 0; a < d; ++a) {
    const int np = static_cast<int>(points[a].size());
    if (np == 0) throw std::invalid_argument("synth_at: empty point list");
    std::vector<double> mat(static_cast<size_t>(np) * c.mode_cap[a]);
    for (int r = 0; r < np; ++r)
      for (int k = 0; k < c.mode_cap[a]; ++k)
        mat[static_cast<size_t>(r) * c.mode_cap[a] + k] =
            std::sin((k + 1.0) * M_PI * points[a][r] / c.domain.lengths[a]);
    work = apply_axis(work, shape, a, mat, np, c.mode_cap[a]);
    shape[a] = np;
  }
  return work;
}

}  // namespace pclab
