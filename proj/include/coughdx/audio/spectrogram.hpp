#pragma once

#include <cstddef>
#include <vector>

#include "coughdx/audio/wav.hpp"

namespace coughdx {

// Squared-magnitude STFT. Frames are stored contiguously:
// power[frame * n_bins + bin], n_bins = n_fft/2 + 1.
struct PowerSpectrogram {
  std::size_t n_bins = 0;
  std::size_t n_frames = 0;
  int n_fft = 0;
  int hop = 0;
  int sample_rate = 0;
  std::vector<double> power;

  double at(std::size_t bin, std::size_t frame) const {
    return power[frame * n_bins + bin];
  }
  const double* frame(std::size_t t) const { return power.data() + t * n_bins; }
  double* frame(std::size_t t) { return power.data() + t * n_bins; }
};

// Symmetric Hann window, w[i] = 0.5*(1 - cos(2*pi*i/(N-1))).
std::vector<double> hann_window(int n);

// Center-padded (reflection, n_fft/2 each side) Hann-windowed power
// spectrogram; frame count is floor(len/hop) + 1. Clips shorter than the
// padding are reflected back and forth rather than rejected.
PowerSpectrogram power_spectrogram(const AudioClip& clip, int n_fft, int hop);

// Reference implementation without the parallel frame loop.
PowerSpectrogram power_spectrogram_serial(const AudioClip& clip, int n_fft,
                                          int hop);

}  // namespace coughdx
