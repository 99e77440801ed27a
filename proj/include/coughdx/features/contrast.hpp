#pragma once

#include "coughdx/audio/spectrogram.hpp"
#include "coughdx/core/matrix.hpp"

namespace coughdx {

// Per-band log difference between spectral peaks and valleys. Bands are the
// residual low band below f_min plus n_bands octave bands doubling from
// f_min, giving n_bands + 1 output rows. Within each band the values are
// sorted descending; the top and bottom ceil(alpha*N) are averaged and the
// difference of their logs is taken (floor 1e-10 inside each log).
Matrix spectral_contrast(const PowerSpectrogram& spec, double alpha = 0.02,
                         double f_min = 200.0, int n_bands = 6);

}  // namespace coughdx
