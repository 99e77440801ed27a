#pragma once

#include "coughdx/audio/spectrogram.hpp"
#include "coughdx/core/matrix.hpp"

namespace coughdx {

// Frequency in Hz to mel: 2595 * log10(1 + f/700).
double mel_scale(double f_hz);

double mel_to_hz(double mel);

// Triangular filters with center frequencies equally spaced on the mel axis.
// weights is (n_mels x n_bins), each row unimodal and nonnegative.
struct MelFilterBank {
  int n_mels = 0;
  int n_bins = 0;
  double f_min = 0.0;
  double f_max = 0.0;
  int sample_rate = 0;
  Matrix weights;

  static MelFilterBank create(int n_mels, int n_fft, int sample_rate,
                              double f_min = 0.0, double f_max = 0.0);
};

// Mel-band energies in dB, referenced to the per-clip maximum:
// 10*log10(max(x, 1e-10)) - 10*log10(max(peak, 1e-10)).
// Output is (n_mels x n_frames).
Matrix mel_spectrogram(const PowerSpectrogram& spec, const MelFilterBank& bank);

}  // namespace coughdx
