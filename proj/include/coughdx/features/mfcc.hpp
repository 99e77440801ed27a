#pragma once

#include "coughdx/core/matrix.hpp"

namespace coughdx {

// Orthonormal DCT-II along the band axis; the first n_coeffs coefficients
// are kept per frame. Input is (n_bands x n_frames) from mel_spectrogram.
Matrix mfcc(const Matrix& mel_db, int n_coeffs = 40);

}  // namespace coughdx
