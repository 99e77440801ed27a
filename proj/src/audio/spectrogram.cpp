#include "coughdx/audio/spectrogram.hpp"

#include <cmath>

#include "coughdx/audio/fft.hpp"
#include "coughdx/core/error.hpp"

namespace coughdx {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Reflected sample lookup for indices outside [0, len). The reflection has
// period 2*(len-1) and never repeats the boundary sample.
double reflect_at(const std::vector<double>& x, long idx) {
  const long len = static_cast<long>(x.size());
  if (len == 1) return x[0];
  const long period = 2 * (len - 1);
  long m = idx % period;
  if (m < 0) m += period;
  if (m >= len) m = period - m;
  return x[static_cast<std::size_t>(m)];
}

PowerSpectrogram compute(const AudioClip& clip, int n_fft, int hop,
                         bool parallel) {
  require(!clip.samples.empty(), ErrorCode::empty_audio, "empty clip");
  require(n_fft >= 2, ErrorCode::argument, "n_fft must be >= 2");
  require(hop >= 1, ErrorCode::argument, "hop must be >= 1");
  for (double s : clip.samples) {
    require(std::isfinite(s), ErrorCode::invalid_signal, "NaN/Inf in samples");
  }

  const long len = static_cast<long>(clip.samples.size());
  const long pad = n_fft / 2;
  const long padded_len = len + 2 * pad;
  const std::size_t n_frames =
      static_cast<std::size_t>((padded_len - n_fft) / hop + 1);
  const std::size_t n_bins = static_cast<std::size_t>(n_fft) / 2 + 1;

  const std::vector<double> window = hann_window(n_fft);

  PowerSpectrogram spec;
  spec.n_bins = n_bins;
  spec.n_frames = n_frames;
  spec.n_fft = n_fft;
  spec.hop = hop;
  spec.sample_rate = clip.sample_rate;
  spec.power.resize(n_bins * n_frames);

#pragma omp parallel for schedule(static) if (parallel)
  for (std::size_t t = 0; t < n_frames; ++t) {
    std::vector<double> frame(static_cast<std::size_t>(n_fft));
    const long start = static_cast<long>(t) * hop - pad;
    for (int i = 0; i < n_fft; ++i) {
      frame[static_cast<std::size_t>(i)] =
          reflect_at(clip.samples, start + i) * window[static_cast<std::size_t>(i)];
    }
    const auto bins = real_dft_onesided(frame.data(), frame.size());
    double* out = spec.frame(t);
    for (std::size_t k = 0; k < n_bins; ++k) {
      out[k] = std::norm(bins[k]);
    }
  }
  return spec;
}

}  // namespace

std::vector<double> hann_window(int n) {
  std::vector<double> w(static_cast<std::size_t>(n));
  if (n == 1) {
    w[0] = 1.0;
    return w;
  }
  for (int i = 0; i < n; ++i) {
    w[static_cast<std::size_t>(i)] =
        0.5 * (1.0 - std::cos(2.0 * kPi * i / (n - 1)));
  }
  return w;
}

PowerSpectrogram power_spectrogram(const AudioClip& clip, int n_fft, int hop) {
  return compute(clip, n_fft, hop, true);
}

PowerSpectrogram power_spectrogram_serial(const AudioClip& clip, int n_fft,
                                          int hop) {
  return compute(clip, n_fft, hop, false);
}

}  // namespace coughdx
