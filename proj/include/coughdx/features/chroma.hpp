#pragma once

#include "coughdx/audio/spectrogram.hpp"
#include "coughdx/core/matrix.hpp"

namespace coughdx {

// 12-bin pitch-class energy profile per frame (0 = C, reference A4 = 440 Hz).
// Each bin's energy goes to the pitch class of its nearest chromatic pitch;
// every frame column is scaled so its maximum is 1 (silent frames stay zero).
Matrix chromagram(const PowerSpectrogram& spec);

}  // namespace coughdx
