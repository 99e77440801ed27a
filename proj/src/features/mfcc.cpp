#include "coughdx/features/mfcc.hpp"

#include <cmath>

#include "coughdx/core/error.hpp"

namespace coughdx {

Matrix mfcc(const Matrix& mel_db, int n_coeffs) {
  const std::size_t n_bands = mel_db.rows;
  require(n_coeffs >= 1, ErrorCode::argument, "n_coeffs must be >= 1");
  require(n_bands >= static_cast<std::size_t>(n_coeffs), ErrorCode::argument,
          "fewer mel bands than requested coefficients");

  // Orthonormal DCT-II basis: y[k] = s(k) * sum_n x[n] cos(pi*(2n+1)*k/(2N)).
  const double n = static_cast<double>(n_bands);
  Matrix basis(static_cast<std::size_t>(n_coeffs), n_bands);
  for (int k = 0; k < n_coeffs; ++k) {
    const double scale = k == 0 ? std::sqrt(1.0 / n) : std::sqrt(2.0 / n);
    for (std::size_t i = 0; i < n_bands; ++i) {
      basis.at(static_cast<std::size_t>(k), i) =
          scale * std::cos(3.14159265358979323846 * (2.0 * i + 1.0) * k /
                           (2.0 * n));
    }
  }

  Matrix out(static_cast<std::size_t>(n_coeffs), mel_db.cols);
  for (std::size_t t = 0; t < mel_db.cols; ++t) {
    for (std::size_t k = 0; k < static_cast<std::size_t>(n_coeffs); ++k) {
      const double* b = basis.row(k);
      double acc = 0.0;
      for (std::size_t i = 0; i < n_bands; ++i) acc += b[i] * mel_db.at(i, t);
      out.at(k, t) = acc;
    }
  }
  return out;
}

}  // namespace coughdx
