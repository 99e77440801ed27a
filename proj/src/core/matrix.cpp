#include "coughdx/core/matrix.hpp"

#include <cmath>

namespace coughdx {

bool Matrix::all_finite() const {
  for (double x : v) {
    if (!std::isfinite(x)) return false;
  }
  return true;
}

Matrix Matrix::take(const std::vector<std::size_t>& row_idx,
                    const std::vector<int>& col_idx) const {
  Matrix out(row_idx.size(), col_idx.size());
  for (std::size_t r = 0; r < row_idx.size(); ++r) {
    const double* src = row(row_idx[r]);
    double* dst = out.row(r);
    for (std::size_t c = 0; c < col_idx.size(); ++c) {
      dst[c] = src[static_cast<std::size_t>(col_idx[c])];
    }
  }
  return out;
}

Matrix Matrix::take_rows(const std::vector<std::size_t>& row_idx) const {
  Matrix out(row_idx.size(), cols);
  for (std::size_t r = 0; r < row_idx.size(); ++r) {
    const double* src = row(row_idx[r]);
    double* dst = out.row(r);
    for (std::size_t c = 0; c < cols; ++c) dst[c] = src[c];
  }
  return out;
}

Matrix Matrix::take_cols(const std::vector<int>& col_idx) const {
  Matrix out(rows, col_idx.size());
  for (std::size_t r = 0; r < rows; ++r) {
    const double* src = row(r);
    double* dst = out.row(r);
    for (std::size_t c = 0; c < col_idx.size(); ++c) {
      dst[c] = src[static_cast<std::size_t>(col_idx[c])];
    }
  }
  return out;
}

}  // namespace coughdx
