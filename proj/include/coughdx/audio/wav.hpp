#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace coughdx {

// Decoded mono waveform. Samples lie in [-1, 1] and are finite.
struct AudioClip {
  std::vector<double> samples;
  int sample_rate = 0;
};

// Decode a RIFF/WAVE container holding PCM 16/24/32-bit integer or 32-bit
// float data with 1 or 2 channels. Stereo is averaged to mono; integer
// samples are scaled by the type's full-scale divisor.
AudioClip decode_wav(std::span<const std::uint8_t> bytes);

AudioClip load_wav(const std::string& path);

}  // namespace coughdx
