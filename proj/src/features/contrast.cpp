#include "coughdx/features/contrast.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "coughdx/core/error.hpp"

namespace coughdx {

namespace {
constexpr double kLogFloor = 1e-10;
}

Matrix spectral_contrast(const PowerSpectrogram& spec, double alpha,
                         double f_min, int n_bands) {
  require(alpha > 0.0 && alpha <= 1.0, ErrorCode::argument, "invalid alpha");
  require(f_min > 0.0, ErrorCode::argument, "f_min must be positive");
  require(n_bands >= 1, ErrorCode::argument, "n_bands must be >= 1");

  // Edges: [0, f_min, 2*f_min, ..., f_min*2^(n_bands-1), nyquist].
  const double nyquist = spec.sample_rate / 2.0;
  std::vector<double> edges;
  edges.push_back(0.0);
  double f = f_min;
  for (int b = 0; b < n_bands; ++b) {
    edges.push_back(f);
    f *= 2.0;
  }
  edges.push_back(nyquist);

  const int n_rows = n_bands + 1;
  std::vector<std::pair<std::size_t, std::size_t>> band_bins;  // [lo, hi)
  for (int b = 0; b < n_rows; ++b) {
    std::size_t lo = spec.n_bins, hi = 0;
    for (std::size_t k = 0; k < spec.n_bins; ++k) {
      const double fk = static_cast<double>(k) * spec.sample_rate / spec.n_fft;
      const bool in_band = b + 1 == n_rows
                               ? (fk >= edges[static_cast<std::size_t>(b)] &&
                                  fk <= edges[static_cast<std::size_t>(b) + 1])
                               : (fk >= edges[static_cast<std::size_t>(b)] &&
                                  fk < edges[static_cast<std::size_t>(b) + 1]);
      if (in_band) {
        lo = std::min(lo, k);
        hi = std::max(hi, k + 1);
      }
    }
    require(lo < hi, ErrorCode::config,
            "spectral-contrast band " + std::to_string(b) +
                " has no FFT bins; increase n_fft or sample rate");
    band_bins.emplace_back(lo, hi);
  }

  Matrix out(static_cast<std::size_t>(n_rows), spec.n_frames);
  std::vector<double> band;
  for (std::size_t t = 0; t < spec.n_frames; ++t) {
    const double* frame = spec.frame(t);
    for (int b = 0; b < n_rows; ++b) {
      const auto [lo, hi] = band_bins[static_cast<std::size_t>(b)];
      band.assign(frame + lo, frame + hi);
      std::sort(band.begin(), band.end(), std::greater<double>());
      const std::size_t n = band.size();
      const std::size_t m = static_cast<std::size_t>(
          std::ceil(alpha * static_cast<double>(n)));
      double top = 0.0, bottom = 0.0;
      for (std::size_t i = 0; i < m; ++i) {
        top += band[i];
        bottom += band[n - 1 - i];
      }
      const double peak = std::log(std::max(top / m, kLogFloor));
      const double valley = std::log(std::max(bottom / m, kLogFloor));
      out.at(static_cast<std::size_t>(b), t) = peak - valley;
    }
  }
  return out;
}

}  // namespace coughdx
