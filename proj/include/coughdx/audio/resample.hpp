#pragma once

#include "coughdx/audio/wav.hpp"

namespace coughdx {

// Band-limited (Hann-windowed sinc) resampling. Duration is preserved to
// within one sample period; identical rates return the clip unchanged.
AudioClip resample(const AudioClip& clip, int target_rate);

}  // namespace coughdx
