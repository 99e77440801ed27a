#pragma once

#include <array>

#include "coughdx/audio/wav.hpp"

namespace coughdx {

inline constexpr int kPipelineSampleRate = 22050;
inline constexpr int kNumFft = 2048;
inline constexpr int kHopLength = 512;
inline constexpr int kNumMfcc = 40;
inline constexpr int kNumChroma = 12;
inline constexpr int kNumMel = 128;
inline constexpr int kNumContrast = 7;
inline constexpr int kNumTonnetz = 6;
inline constexpr int kNumFeatures = 193;

// The fused per-clip acoustic descriptor. Each family is averaged over
// frames; fused is the concatenation (mfcc, chroma, mel, contrast, tonnetz).
struct FeatureVector {
  std::array<double, kNumMfcc> mfcc{};
  std::array<double, kNumChroma> chroma{};
  std::array<double, kNumMel> mel{};
  std::array<double, kNumContrast> contrast{};
  std::array<double, kNumTonnetz> tonnetz{};
  std::array<double, kNumFeatures> fused{};
};

// Full extraction at n_fft 2048 / hop 512. The clip must already be at the
// pipeline sample rate.
FeatureVector extract_feature_vector(const AudioClip& clip);

}  // namespace coughdx
