#include "coughdx/features/extract.hpp"

#include <cmath>

#include "coughdx/audio/spectrogram.hpp"
#include "coughdx/core/error.hpp"
#include "coughdx/features/chroma.hpp"
#include "coughdx/features/contrast.hpp"
#include "coughdx/features/mel.hpp"
#include "coughdx/features/mfcc.hpp"
#include "coughdx/features/tonnetz.hpp"

namespace coughdx {

namespace {

// Arithmetic mean over frames for every feature row.
template <std::size_t N>
void mean_over_frames(const Matrix& m, std::array<double, N>& out) {
  for (std::size_t r = 0; r < N; ++r) {
    double acc = 0.0;
    for (std::size_t t = 0; t < m.cols; ++t) acc += m.at(r, t);
    out[r] = acc / static_cast<double>(m.cols);
  }
}

}  // namespace

FeatureVector extract_feature_vector(const AudioClip& clip) {
  require(clip.sample_rate == kPipelineSampleRate, ErrorCode::argument,
          "clip must be resampled to the pipeline sample rate first");

  const PowerSpectrogram spec = power_spectrogram(clip, kNumFft, kHopLength);
  const MelFilterBank bank =
      MelFilterBank::create(kNumMel, kNumFft, clip.sample_rate);
  const Matrix mel_db = mel_spectrogram(spec, bank);
  const Matrix mfcc_frames = mfcc(mel_db, kNumMfcc);
  const Matrix chroma_frames = chromagram(spec);
  const Matrix tonnetz_frames = tonnetz(chroma_frames);
  const Matrix contrast_frames = spectral_contrast(spec);

  FeatureVector fv;
  mean_over_frames(mfcc_frames, fv.mfcc);
  mean_over_frames(chroma_frames, fv.chroma);
  mean_over_frames(mel_db, fv.mel);
  mean_over_frames(contrast_frames, fv.contrast);
  mean_over_frames(tonnetz_frames, fv.tonnetz);

  std::size_t pos = 0;
  for (double x : fv.mfcc) fv.fused[pos++] = x;
  for (double x : fv.chroma) fv.fused[pos++] = x;
  for (double x : fv.mel) fv.fused[pos++] = x;
  for (double x : fv.contrast) fv.fused[pos++] = x;
  for (double x : fv.tonnetz) fv.fused[pos++] = x;
  require(pos == kNumFeatures, ErrorCode::state, "feature block layout broken");
  for (double x : fv.fused) {
    require(std::isfinite(x), ErrorCode::numeric, "non-finite feature value");
  }
  return fv;
}

}  // namespace coughdx
