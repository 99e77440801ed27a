#include "coughdx/features/chroma.hpp"

#include <cmath>

#include "coughdx/core/error.hpp"

namespace coughdx {

Matrix chromagram(const PowerSpectrogram& spec) {
  require(spec.sample_rate > 0, ErrorCode::argument, "sample rate unknown");

  // Pitch class per bin; DC carries no pitch and is skipped.
  std::vector<int> bin_class(spec.n_bins, -1);
  for (std::size_t k = 1; k < spec.n_bins; ++k) {
    const double f =
        static_cast<double>(k) * spec.sample_rate / spec.n_fft;
    const double midi = 69.0 + 12.0 * std::log2(f / 440.0);
    const long nearest = std::lround(midi);
    bin_class[k] = static_cast<int>(((nearest % 12) + 12) % 12);
  }

  Matrix chroma(12, spec.n_frames);
  for (std::size_t t = 0; t < spec.n_frames; ++t) {
    const double* frame = spec.frame(t);
    for (std::size_t k = 1; k < spec.n_bins; ++k) {
      chroma.at(static_cast<std::size_t>(bin_class[k]), t) += frame[k];
    }
    double peak = 0.0;
    for (std::size_t c = 0; c < 12; ++c) peak = std::max(peak, chroma.at(c, t));
    if (peak > 0.0) {
      for (std::size_t c = 0; c < 12; ++c) chroma.at(c, t) /= peak;
    }
  }
  return chroma;
}

}  // namespace coughdx
