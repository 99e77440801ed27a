#include "coughdx/audio/resample.hpp"

#include <cmath>

#include "coughdx/core/error.hpp"

namespace coughdx {

namespace {

constexpr int kHalfTaps = 32;
constexpr double kPi = 3.14159265358979323846;

double sinc(double x) {
  if (x == 0.0) return 1.0;
  const double px = kPi * x;
  return std::sin(px) / px;
}

}  // namespace

AudioClip resample(const AudioClip& clip, int target_rate) {
  require(target_rate > 0, ErrorCode::argument, "target_rate must be positive");
  require(!clip.samples.empty(), ErrorCode::empty_audio, "empty clip");
  require(clip.sample_rate > 0, ErrorCode::argument, "invalid source rate");
  if (target_rate == clip.sample_rate) return clip;

  const double ratio = static_cast<double>(target_rate) / clip.sample_rate;
  const std::size_t in_len = clip.samples.size();
  const std::size_t out_len = static_cast<std::size_t>(
      std::llround(static_cast<double>(in_len) * ratio));

  // Cutoff at the lower of the two Nyquist rates; window widened by 1/cutoff
  // when downsampling so the filter keeps enough zero crossings.
  const double cutoff = ratio < 1.0 ? ratio : 1.0;
  const double half_width = kHalfTaps / cutoff;

  AudioClip out;
  out.sample_rate = target_rate;
  out.samples.resize(out_len);

  const double* x = clip.samples.data();
#pragma omp parallel for schedule(static)
  for (std::size_t n = 0; n < out_len; ++n) {
    const double center = static_cast<double>(n) / ratio;
    const long lo = static_cast<long>(std::ceil(center - half_width));
    const long hi = static_cast<long>(std::floor(center + half_width));
    double acc = 0.0;
    for (long m = lo; m <= hi; ++m) {
      if (m < 0 || m >= static_cast<long>(in_len)) continue;
      const double t = center - static_cast<double>(m);
      const double w = 0.5 * (1.0 + std::cos(kPi * t / half_width));  // Hann
      acc += x[m] * cutoff * sinc(cutoff * t) * w;
    }
    out.samples[n] = acc;
  }
  return out;
}

}  // namespace coughdx
