// Compares the OpenMP kernels against their serial reference
// implementations: wall time, speedup and maximum absolute difference.

#include <chrono>
#include <cstdio>
#include <vector>

#include "coughdx/audio/spectrogram.hpp"
#include "coughdx/core/rng.hpp"
#include "coughdx/ensemble/extra_trees.hpp"
#include "coughdx/neural/forest.hpp"

namespace {

using namespace coughdx;

double now_ms() {
  return std::chrono::duration<double, std::milli>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

template <typename F>
double time_ms(F&& fn, int repeats) {
  const double t0 = now_ms();
  for (int i = 0; i < repeats; ++i) fn();
  return (now_ms() - t0) / repeats;
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    worst = std::max(worst, std::abs(a[i] - b[i]));
  }
  return worst;
}

void report(const char* name, double serial_ms, double parallel_ms,
            double diff) {
  std::printf("%-28s serial %9.2f ms   parallel %9.2f ms   speedup %5.2fx   max|diff| %g\n",
              name, serial_ms, parallel_ms, serial_ms / parallel_ms, diff);
}

}  // namespace

int main() {
  Rng rng(7);

  {  // power spectrogram, 4 s of audio
    AudioClip clip;
    clip.sample_rate = 22050;
    clip.samples.resize(4 * 22050);
    for (double& s : clip.samples) s = rng.uniform(-1.0, 1.0);
    PowerSpectrogram out_p, out_s;
    const double tp = time_ms([&] { out_p = power_spectrogram(clip, 2048, 512); }, 3);
    const double ts = time_ms([&] { out_s = power_spectrogram_serial(clip, 2048, 512); }, 3);
    report("power_spectrogram", ts, tp, max_abs_diff(out_p.power, out_s.power));
  }

  {  // extra-trees fit + predict
    const std::size_t n = 600, d = 60;
    Matrix x(n, d);
    std::vector<int> y(n);
    for (std::size_t r = 0; r < n; ++r) {
      y[r] = static_cast<int>(rng.uniform_int(2));
      for (std::size_t c = 0; c < d; ++c) {
        x.at(r, c) = rng.normal() + (c < 5 ? 1.2 * y[r] : 0.0);
      }
    }
    ExtraTreesOptions opt;
    opt.n_estimators = 100;
    opt.seed = 21;
    ExtraTreesModel mp, ms;
    const double tp = time_ms([&] { mp = fit_extra_trees(x, y, opt); }, 3);
    const double ts = time_ms([&] { ms = fit_extra_trees_serial(x, y, opt); }, 3);
    report("extra_trees_fit", ts, tp,
           max_abs_diff(extra_trees_predict_proba(mp, x),
                        extra_trees_predict_proba(ms, x)));
  }

  {  // forest forward + gradients
    const std::size_t n = 512, d = 193;
    Matrix x(n, d);
    std::vector<int> y(n);
    for (std::size_t r = 0; r < n; ++r) {
      y[r] = static_cast<int>(rng.uniform_int(2));
      for (std::size_t c = 0; c < d; ++c) x.at(r, c) = rng.normal();
    }
    HyperParams hp;
    hp.num_trees = 10;
    hp.depth = 8;
    ForestModel model = init_forest(hp, static_cast<int>(d), 3);

    std::vector<double> pp, ps;
    const double tp = time_ms([&] { pp = forest_predict_proba(model, x); }, 3);
    const double ts = time_ms([&] { ps = forest_predict_proba_serial(model, x); }, 3);
    report("forest_predict", ts, tp, max_abs_diff(pp, ps));

    std::vector<std::size_t> rows(n);
    for (std::size_t i = 0; i < n; ++i) rows[i] = i;
    ForestGradients gp = ForestGradients::zeros_like(model);
    ForestGradients gs = ForestGradients::zeros_like(model);
    const double tgp =
        time_ms([&] { loss_and_gradients(model, x, y, rows, gp); }, 3);
    const double tgs =
        time_ms([&] { loss_and_gradients_serial(model, x, y, rows, gs); }, 3);
    double diff = 0.0;
    for (std::size_t t = 0; t < model.trees.size(); ++t) {
      diff = std::max(diff, max_abs_diff(gp.trees[t].weights, gs.trees[t].weights));
      diff = std::max(diff, max_abs_diff(gp.trees[t].leaf_logits,
                                         gs.trees[t].leaf_logits));
    }
    report("forest_loss_gradients", tgs, tgp, diff);
  }

  return 0;
}
