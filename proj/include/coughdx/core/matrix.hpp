#pragma once

#include <cstddef>
#include <vector>

namespace coughdx {

// Dense row-major matrix of doubles. Rows are samples (or feature dims for
// per-frame matrices, where columns are frames).
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> v;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c, double fill = 0.0)
      : rows(r), cols(c), v(r * c, fill) {}

  double& at(std::size_t r, std::size_t c) { return v[r * cols + c]; }
  double at(std::size_t r, std::size_t c) const { return v[r * cols + c]; }
  double* row(std::size_t r) { return v.data() + r * cols; }
  const double* row(std::size_t r) const { return v.data() + r * cols; }

  bool all_finite() const;

  // New matrix with the given rows (in order) and columns (in order).
  Matrix take(const std::vector<std::size_t>& row_idx,
              const std::vector<int>& col_idx) const;
  Matrix take_rows(const std::vector<std::size_t>& row_idx) const;
  Matrix take_cols(const std::vector<int>& col_idx) const;
};

}  // namespace coughdx
