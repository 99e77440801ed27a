#include <doctest.h>

#include <cmath>

#include "coughdx/audio/spectrogram.hpp"
#include "coughdx/core/error.hpp"
#include "coughdx/core/rng.hpp"
#include "coughdx/features/chroma.hpp"
#include "coughdx/features/contrast.hpp"
#include "coughdx/features/extract.hpp"
#include "coughdx/features/mel.hpp"
#include "coughdx/features/mfcc.hpp"
#include "coughdx/features/tonnetz.hpp"
#include "support/oracles.hpp"
#include "support/synthetic.hpp"

using namespace coughdx;

namespace {

AudioClip clip_of(std::vector<double> samples) {
  AudioClip clip;
  clip.sample_rate = kPipelineSampleRate;
  clip.samples = std::move(samples);
  return clip;
}

}  // namespace

TEST_SUITE_BEGIN("features");

TEST_CASE("mel_scale fixed points") {
  CHECK(mel_scale(0.0) == 0.0);
  CHECK(mel_scale(700.0) == doctest::Approx(2595.0 * std::log10(2.0)).epsilon(1e-12));
  CHECK(std::abs(mel_scale(700.0) - 781.17) < 0.01);
  CHECK(std::abs(mel_scale(1000.0) - 999.99) < 0.01);
}

TEST_CASE("mel_scale is strictly increasing") {
  Rng rng(9);
  for (int i = 0; i < 200; ++i) {
    const double a = rng.uniform(0.0, 11000.0);
    const double b = a + rng.uniform(1e-6, 100.0);
    CHECK(mel_scale(b) > mel_scale(a));
  }
}

TEST_CASE("mel_scale rejects negative frequencies") {
  try {
    mel_scale(-1.0);
    FAIL("expected error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::argument);
  }
}

TEST_CASE("filter bank has 128 x 1025 triangular rows") {
  const MelFilterBank bank = MelFilterBank::create(128, 2048, 22050);
  CHECK(bank.weights.rows == 128);
  CHECK(bank.weights.cols == 1025);
  for (std::size_t m = 0; m < 128; ++m) {
    bool seen_descent = false;
    double prev = 0.0;
    double peak = 0.0;
    for (std::size_t k = 0; k < 1025; ++k) {
      const double w = bank.weights.at(m, k);
      CHECK(w >= 0.0);
      peak = std::max(peak, w);
      if (w < prev) seen_descent = true;
      if (w > prev) CHECK(!seen_descent);  // unimodal: no rise after a fall
      prev = w;
    }
    CHECK(peak > 0.0);
  }
}

TEST_CASE("mel_spectrogram of silence is flat at the floor") {
  AudioClip clip = clip_of(std::vector<double>(4096, 0.0));
  const PowerSpectrogram spec = power_spectrogram(clip, 2048, 512);
  const MelFilterBank bank = MelFilterBank::create(128, 2048, 22050);
  const Matrix mel = mel_spectrogram(spec, bank);
  for (double v : mel.v) CHECK(v == mel.v[0]);
}

TEST_CASE("a tone at a filter center peaks in that band") {
  const MelFilterBank bank = MelFilterBank::create(128, 2048, 22050);
  // Center frequency of band 40 recovered from the bank itself.
  std::size_t center_bin = 0;
  double best = 0.0;
  for (std::size_t k = 0; k < bank.weights.cols; ++k) {
    if (bank.weights.at(40, k) > best) {
      best = bank.weights.at(40, k);
      center_bin = k;
    }
  }
  const double freq = static_cast<double>(center_bin) * 22050.0 / 2048.0;
  AudioClip clip = clip_of(synthetic::sine(freq, 22050, 0.5));
  const PowerSpectrogram spec = power_spectrogram(clip, 2048, 512);
  const Matrix mel = mel_spectrogram(spec, bank);
  for (std::size_t t = 2; t + 2 < mel.cols; ++t) {
    std::size_t argmax = 0;
    for (std::size_t m = 1; m < 128; ++m) {
      if (mel.at(m, t) > mel.at(argmax, t)) argmax = m;
    }
    CHECK(std::abs(static_cast<int>(argmax) - 40) <= 1);
  }
}

TEST_CASE("mel_spectrogram rejects mismatched banks") {
  AudioClip clip = clip_of(synthetic::noise(4096, 2));
  const PowerSpectrogram spec = power_spectrogram(clip, 2048, 512);
  const MelFilterBank bank = MelFilterBank::create(128, 1024, 22050);
  try {
    mel_spectrogram(spec, bank);
    FAIL("expected error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::argument);
  }
}

TEST_CASE("mfcc of a constant column is (c*sqrt(128), 0, ...)") {
  const double c = -37.25;
  Matrix mel_db(128, 3, c);
  const Matrix out = mfcc(mel_db, 40);
  for (std::size_t t = 0; t < 3; ++t) {
    CHECK(out.at(0, t) == doctest::Approx(c * std::sqrt(128.0)).epsilon(1e-12));
    for (std::size_t k = 1; k < 40; ++k) {
      CHECK(std::abs(out.at(k, t)) < 1e-9);
    }
  }
}

TEST_CASE("mfcc matches the naive DCT-II oracle") {
  Rng rng(31);
  Matrix mel_db(128, 2);
  std::vector<double> column(128);
  for (std::size_t i = 0; i < 128; ++i) {
    column[i] = rng.uniform(-80.0, 0.0);
    mel_db.at(i, 0) = column[i];
    mel_db.at(i, 1) = column[i];
  }
  const Matrix out = mfcc(mel_db, 40);
  const auto expected = oracles::naive_dct2(column);
  for (std::size_t k = 0; k < 40; ++k) {
    CHECK(out.at(k, 0) == doctest::Approx(expected[k]).epsilon(1e-9));
    CHECK(out.at(k, 1) == out.at(k, 0));  // identical frames, identical output
  }
}

TEST_CASE("mfcc needs at least 40 bands") {
  Matrix mel_db(20, 1, 0.0);
  try {
    mfcc(mel_db, 40);
    FAIL("expected error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::argument);
  }
}

TEST_CASE("the DCT basis is orthonormal") {
  // Push each canonical basis vector through and reassemble the full matrix.
  Matrix basis_in(128, 128, 0.0);
  for (std::size_t i = 0; i < 128; ++i) basis_in.at(i, i) = 1.0;
  const Matrix g = mfcc(basis_in, 128);
  for (std::size_t a = 0; a < 128; ++a) {
    for (std::size_t b = 0; b < 128; ++b) {
      double dot = 0.0;
      for (std::size_t k = 0; k < 128; ++k) dot += g.at(k, a) * g.at(k, b);
      CHECK(std::abs(dot - (a == b ? 1.0 : 0.0)) < 1e-9);
    }
  }
}

TEST_CASE("chromagram puts a 440 Hz tone in pitch class A") {
  AudioClip clip = clip_of(synthetic::sine(440.0, 22050, 0.5));
  const PowerSpectrogram spec = power_spectrogram(clip, 2048, 512);
  const Matrix chroma = chromagram(spec);
  CHECK(oracles::pitch_class(440.0) == 9);
  for (std::size_t t = 2; t + 2 < chroma.cols; ++t) {
    std::size_t argmax = 0;
    for (std::size_t c = 1; c < 12; ++c) {
      if (chroma.at(c, t) > chroma.at(argmax, t)) argmax = c;
    }
    CHECK(argmax == 9);
    double peak = 0.0;
    for (std::size_t c = 0; c < 12; ++c) peak = std::max(peak, chroma.at(c, t));
    CHECK(peak == 1.0);  // max-normalized
  }
}

TEST_CASE("chromagram of silence is zero") {
  AudioClip clip = clip_of(std::vector<double>(4096, 0.0));
  const Matrix chroma = chromagram(power_spectrogram(clip, 2048, 512));
  for (double v : chroma.v) CHECK(v == 0.0);
}

TEST_CASE("tonnetz of a one-hot chroma is the first transform column") {
  Matrix chroma(12, 1, 0.0);
  chroma.at(0, 0) = 1.0;
  const Matrix z = tonnetz(chroma);
  const double expected[6] = {0.0, 1.0, 0.0, 1.0, 0.0, 0.5};
  for (std::size_t d = 0; d < 6; ++d) {
    CHECK(z.at(d, 0) == doctest::Approx(expected[d]).epsilon(1e-12));
  }
}

TEST_CASE("tonnetz of uniform chroma cancels to zero") {
  Matrix chroma(12, 1, 1.0 / 12.0);
  const Matrix z = tonnetz(chroma);
  for (std::size_t d = 0; d < 6; ++d) {
    CHECK(std::abs(z.at(d, 0)) < 1e-9);
  }
}

TEST_CASE("tonnetz maps zero frames to zero and rejects negatives") {
  Matrix chroma(12, 2, 0.0);
  chroma.at(3, 1) = 0.7;
  const Matrix z = tonnetz(chroma);
  for (std::size_t d = 0; d < 6; ++d) CHECK(z.at(d, 0) == 0.0);

  chroma.at(5, 0) = -0.1;
  try {
    tonnetz(chroma);
    FAIL("expected error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::argument);
  }
}

TEST_CASE("tonnetz output norm is bounded for normalized chroma") {
  Rng rng(77);
  const double bound = std::sqrt(1.0 + 1.0 + 0.25) + 1e-12;
  for (int trial = 0; trial < 50; ++trial) {
    Matrix chroma(12, 1);
    for (std::size_t c = 0; c < 12; ++c) chroma.at(c, 0) = rng.uniform();
    const Matrix z = tonnetz(chroma);
    double norm2 = 0.0;
    for (std::size_t d = 0; d < 6; ++d) norm2 += z.at(d, 0) * z.at(d, 0);
    CHECK(std::sqrt(norm2) <= bound);
  }
}

TEST_CASE("spectral_contrast of a flat spectrum is zero") {
  AudioClip clip = clip_of(synthetic::noise(4096, 4));
  PowerSpectrogram spec = power_spectrogram(clip, 2048, 512);
  for (double& v : spec.power) v = 3.5;
  const Matrix sc = spectral_contrast(spec);
  CHECK(sc.rows == 7);
  for (double v : sc.v) CHECK(std::abs(v) < 1e-12);
}

TEST_CASE("a dominant bin makes contrast strictly positive") {
  AudioClip clip = clip_of(synthetic::noise(4096, 4));
  PowerSpectrogram spec = power_spectrogram(clip, 2048, 512);
  for (double& v : spec.power) v = 1e-10;
  // One loud bin inside the 400-800 Hz band.
  const std::size_t loud = static_cast<std::size_t>(600.0 * 2048 / 22050.0);
  for (std::size_t t = 0; t < spec.n_frames; ++t) spec.frame(t)[loud] = 1.0;
  const Matrix sc = spectral_contrast(spec);
  for (std::size_t t = 0; t < sc.cols; ++t) CHECK(sc.at(2, t) > 0.0);
}

TEST_CASE("spectral_contrast matches the sort-and-average oracle") {
  AudioClip clip = clip_of(synthetic::noise(8192, 23));
  const PowerSpectrogram spec = power_spectrogram(clip, 2048, 512);
  const Matrix sc = spectral_contrast(spec);
  // Band edges as documented: residual low band plus octaves from 200 Hz.
  const double edges[8] = {0, 200, 400, 800, 1600, 3200, 6400, 11025};
  for (std::size_t t = 0; t < std::min<std::size_t>(4, spec.n_frames); ++t) {
    for (int b = 0; b < 7; ++b) {
      std::vector<double> band;
      for (std::size_t k = 0; k < spec.n_bins; ++k) {
        const double f = static_cast<double>(k) * 22050.0 / 2048.0;
        const bool in = b == 6 ? (f >= edges[b] && f <= edges[b + 1])
                               : (f >= edges[b] && f < edges[b + 1]);
        if (in) band.push_back(spec.at(k, t));
      }
      const double expected = oracles::band_contrast(band, 0.02);
      CHECK(sc.at(static_cast<std::size_t>(b), t) ==
            doctest::Approx(expected).epsilon(1e-9));
      CHECK(sc.at(static_cast<std::size_t>(b), t) >= 0.0);
    }
  }
}

TEST_CASE("spectral_contrast needs enough bins per band") {
  AudioClip clip = clip_of(synthetic::noise(256, 6));
  // At n_fft 16 the bin spacing is ~1378 Hz, leaving low bands empty.
  const PowerSpectrogram spec = power_spectrogram(clip, 16, 8);
  try {
    spectral_contrast(spec);
    FAIL("expected error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::config);
  }
}

TEST_CASE("extract_feature_vector fuses 193 features in block order") {
  AudioClip clip = clip_of(synthetic::noise(22050, 12));
  const FeatureVector fv = extract_feature_vector(clip);
  CHECK(fv.fused.size() == 193);
  std::size_t pos = 0;
  for (double v : fv.mfcc) CHECK(fv.fused[pos++] == v);
  for (double v : fv.chroma) CHECK(fv.fused[pos++] == v);
  for (double v : fv.mel) CHECK(fv.fused[pos++] == v);
  for (double v : fv.contrast) CHECK(fv.fused[pos++] == v);
  for (double v : fv.tonnetz) CHECK(fv.fused[pos++] == v);
  CHECK(pos == 193);
}

TEST_CASE("extracting silence degenerates as documented") {
  AudioClip clip = clip_of(std::vector<double>(22050, 0.0));
  const FeatureVector fv = extract_feature_vector(clip);
  // Mel dB of silence is a constant; its DCT keeps only coefficient 0.
  const double mel_const = fv.mel[0];
  for (double v : fv.mel) CHECK(v == mel_const);
  CHECK(fv.mfcc[0] ==
        doctest::Approx(mel_const * std::sqrt(128.0)).epsilon(1e-9));
  for (std::size_t k = 1; k < fv.mfcc.size(); ++k) {
    CHECK(std::abs(fv.mfcc[k]) < 1e-9);
  }
  for (double v : fv.chroma) CHECK(v == 0.0);
  for (double v : fv.tonnetz) CHECK(v == 0.0);
}

TEST_CASE("extraction is deterministic") {
  AudioClip clip = clip_of(synthetic::noise(15000, 8));
  const FeatureVector a = extract_feature_vector(clip);
  const FeatureVector b = extract_feature_vector(clip);
  CHECK(a.fused == b.fused);
}

TEST_CASE("chroma and tonnetz blocks are gain-invariant") {
  AudioClip clip = clip_of(synthetic::sine(523.25, 22050, 0.7, 0.3));
  AudioClip louder = clip;
  // A power-of-two gain propagates exactly through floating point, so the
  // per-frame max normalization must cancel it bit for bit.
  for (double& s : louder.samples) s *= 2.0;
  const FeatureVector a = extract_feature_vector(clip);
  const FeatureVector b = extract_feature_vector(louder);
  CHECK(a.chroma == b.chroma);
  CHECK(a.tonnetz == b.tonnetz);
}

TEST_CASE("extraction requires the pipeline sample rate") {
  AudioClip clip;
  clip.sample_rate = 44100;
  clip.samples = synthetic::noise(1000, 2);
  try {
    extract_feature_vector(clip);
    FAIL("expected error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::argument);
  }
}

TEST_SUITE_END();
