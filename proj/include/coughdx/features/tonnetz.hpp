#pragma once

#include "coughdx/core/matrix.hpp"

namespace coughdx {

// The 6x12 harmonic-network projection used for tonal centroids, with radii
// (1, 1, 0.5) for the fifths, minor-third and major-third circles.
const Matrix& tonnetz_transform();

// Per frame: zeta = (Phi * c) / ||c||_1; all-zero chroma frames map to zero.
// Input must be a (12 x n_frames) nonnegative chroma matrix.
Matrix tonnetz(const Matrix& chroma);

}  // namespace coughdx
