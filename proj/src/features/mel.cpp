#include "coughdx/features/mel.hpp"

#include <algorithm>
#include <cmath>

#include "coughdx/core/error.hpp"

namespace coughdx {

namespace {
constexpr double kDbFloor = 1e-10;
}

double mel_scale(double f_hz) {
  require(f_hz >= 0.0, ErrorCode::argument, "frequency must be nonnegative");
  return 2595.0 * std::log10(1.0 + f_hz / 700.0);
}

double mel_to_hz(double mel) {
  return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0);
}

MelFilterBank MelFilterBank::create(int n_mels, int n_fft, int sample_rate,
                                    double f_min, double f_max) {
  require(n_mels >= 1, ErrorCode::argument, "n_mels must be >= 1");
  require(n_fft >= 2, ErrorCode::argument, "n_fft must be >= 2");
  require(sample_rate > 0, ErrorCode::argument, "sample_rate must be positive");
  if (f_max <= 0.0) f_max = sample_rate / 2.0;
  require(f_min >= 0.0 && f_min < f_max, ErrorCode::argument,
          "invalid frequency range");

  MelFilterBank bank;
  bank.n_mels = n_mels;
  bank.n_bins = n_fft / 2 + 1;
  bank.f_min = f_min;
  bank.f_max = f_max;
  bank.sample_rate = sample_rate;
  bank.weights = Matrix(static_cast<std::size_t>(n_mels),
                        static_cast<std::size_t>(bank.n_bins));

  // n_mels + 2 breakpoints equally spaced on the mel axis.
  const double mel_lo = mel_scale(f_min);
  const double mel_hi = mel_scale(f_max);
  std::vector<double> hz(static_cast<std::size_t>(n_mels) + 2);
  for (int i = 0; i < n_mels + 2; ++i) {
    const double m = mel_lo + (mel_hi - mel_lo) * i / (n_mels + 1);
    hz[static_cast<std::size_t>(i)] = mel_to_hz(m);
  }

  for (int m = 0; m < n_mels; ++m) {
    const double lo = hz[static_cast<std::size_t>(m)];
    const double center = hz[static_cast<std::size_t>(m) + 1];
    const double hi = hz[static_cast<std::size_t>(m) + 2];
    for (int k = 0; k < bank.n_bins; ++k) {
      const double f = static_cast<double>(k) * sample_rate / n_fft;
      double w = 0.0;
      if (f > lo && f < hi) {
        w = f <= center ? (f - lo) / (center - lo) : (hi - f) / (hi - center);
      }
      bank.weights.at(static_cast<std::size_t>(m), static_cast<std::size_t>(k)) =
          std::max(0.0, w);
    }
  }
  return bank;
}

Matrix mel_spectrogram(const PowerSpectrogram& spec, const MelFilterBank& bank) {
  require(bank.n_bins == static_cast<int>(spec.n_bins), ErrorCode::argument,
          "filter bank does not match spectrogram bin count");
  require(bank.sample_rate == spec.sample_rate, ErrorCode::argument,
          "filter bank does not match spectrogram sample rate");

  const std::size_t n_mels = static_cast<std::size_t>(bank.n_mels);
  Matrix mel(n_mels, spec.n_frames);
  double peak = 0.0;
  for (std::size_t t = 0; t < spec.n_frames; ++t) {
    const double* frame = spec.frame(t);
    for (std::size_t m = 0; m < n_mels; ++m) {
      const double* w = bank.weights.row(m);
      double acc = 0.0;
      for (std::size_t k = 0; k < spec.n_bins; ++k) acc += w[k] * frame[k];
      mel.at(m, t) = acc;
      peak = std::max(peak, acc);
    }
  }
  const double ref_db = 10.0 * std::log10(std::max(peak, kDbFloor));
  for (double& x : mel.v) {
    x = 10.0 * std::log10(std::max(x, kDbFloor)) - ref_db;
  }
  return mel;
}

}  // namespace coughdx
