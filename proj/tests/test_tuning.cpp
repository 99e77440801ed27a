#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "coughdx/core/error.hpp"
#include "coughdx/core/rng.hpp"
#include "coughdx/tuning/bayesopt.hpp"
#include "coughdx/tuning/gp.hpp"

using namespace coughdx;

TEST_SUITE_BEGIN("tuning");

TEST_CASE("the posterior interpolates an observation as noise vanishes") {
  GpConfig cfg;
  cfg.sigma_n = 1e-8;
  const std::vector<std::vector<double>> pts{{0.3, 0.4}, {0.8, 0.1}};
  const std::vector<double> scores{0.6, 0.9};
  const GpPrediction at_first = gp_posterior(pts, scores, pts[0], cfg);
  CHECK(std::abs(at_first.mean - 0.6) < 1e-6);
  CHECK(at_first.variance <= 1e-6);
}

TEST_CASE("far from data the posterior reverts to the prior") {
  const std::vector<std::vector<double>> pts{{0.1, 0.1}, {0.2, 0.15}};
  const std::vector<double> scores{0.4, 0.8};
  const GpPrediction far = gp_posterior(pts, scores, {9.0, 9.0});
  CHECK(std::abs(far.mean - 0.6) < 1e-3);          // mean of the scores
  CHECK(std::abs(far.variance - 1.0) < 1e-3);      // sigma_f^2
}

TEST_CASE("the midpoint of two symmetric observations averages them") {
  // Closed-form oracle: by symmetry the two kernel weights are equal, so
  // with a centered prior the posterior mean at the midpoint is exactly the
  // average of the two scores.
  const std::vector<std::vector<double>> pts{{0.2}, {0.6}};
  const std::vector<double> scores{0.3, 0.7};
  const GpPrediction mid = gp_posterior(pts, scores, {0.4});

  // Independent 2x2 solve.
  GpConfig cfg;
  const double sf2 = cfg.sigma_f * cfg.sigma_f;
  const double k11 = sf2 + cfg.sigma_n * cfg.sigma_n;
  const double k12 = sf2 * std::exp(-0.16 / (2 * cfg.length * cfg.length));
  const double kstar = sf2 * std::exp(-0.04 / (2 * cfg.length * cfg.length));
  const double mean_prior = 0.5;
  const double det = k11 * k11 - k12 * k12;
  const double a0 = (k11 * (scores[0] - mean_prior) - k12 * (scores[1] - mean_prior)) / det;
  const double a1 = (k11 * (scores[1] - mean_prior) - k12 * (scores[0] - mean_prior)) / det;
  const double expected = mean_prior + kstar * (a0 + a1);

  CHECK(std::abs(mid.mean - expected) < 1e-9);
  CHECK(std::abs(mid.mean - 0.5) < 1e-6);
}

TEST_CASE("expected improvement closed forms") {
  CHECK(expected_improvement(0.7, 0.0, 0.7) == 0.0);
  CHECK(std::abs(expected_improvement(0.5, 1.0, 0.5) -
                 1.0 / std::sqrt(2.0 * 3.14159265358979323846)) < 1e-9);
  // More uncertainty can only help when the mean does not beat the best.
  double prev = 0.0;
  for (double var : {0.01, 0.04, 0.09, 0.25, 1.0}) {
    const double ei = expected_improvement(0.4, var, 0.5);
    CHECK(ei > prev);
    prev = ei;
  }
}

TEST_CASE("negative variance is rejected") {
  CHECK_THROWS_AS(expected_improvement(0.5, -1.0, 0.5), Error);
}

TEST_CASE("optimize finds the peak of a 1-D objective on the rate axis") {
  const auto objective = [](const HyperParams& hp) {
    const double d = hp.features_rate - 0.7;
    return -d * d;
  };
  // Exhaustive 0.001-grid oracle over the same axis.
  double oracle_best = -1e9, oracle_rate = 0.0;
  for (int i = 0; i <= 500; ++i) {
    const double rate = 0.5 + 0.001 * i;
    const double v = -(rate - 0.7) * (rate - 0.7);
    if (v > oracle_best) {
      oracle_best = v;
      oracle_rate = rate;
    }
  }
  CHECK(std::abs(oracle_rate - 0.7) < 1e-9);

  const OptimizeResult result = optimize(SearchSpace{}, objective, 25, 3);
  CHECK(result.trials.size() == 25);
  CHECK(std::abs(result.best.features_rate - oracle_rate) <= 0.05);
}

TEST_CASE("a budget of five is pure space filling") {
  int calls = 0;
  const auto objective = [&calls](const HyperParams&) {
    return 0.1 * ++calls;
  };
  const OptimizeResult result = optimize(SearchSpace{}, objective, 5, 1);
  CHECK(calls == 5);
  CHECK(result.trials.size() == 5);
  double best = 0.0;
  for (const auto& t : result.trials) best = std::max(best, t.score);
  CHECK(result.best_score == best);
}

TEST_CASE("budgets below five are rejected") {
  CHECK_THROWS_AS(
      optimize(SearchSpace{}, [](const HyperParams&) { return 0.5; }, 4, 1),
      Error);
}

TEST_CASE("every proposed point is inside the space") {
  const SearchSpace space;
  const auto objective = [](const HyperParams& hp) {
    return 0.001 * hp.num_trees;
  };
  const OptimizeResult result = optimize(space, objective, 12, 9);
  for (const auto& t : result.trials) {
    CHECK(t.params.num_trees >= space.trees_min);
    CHECK(t.params.num_trees <= space.trees_max);
    CHECK(t.params.depth >= space.depth_min);
    CHECK(t.params.depth <= space.depth_max);
    CHECK(t.params.features_rate >= space.rate_min);
    CHECK(t.params.features_rate <= space.rate_max);
    CHECK(std::find(space.batch_sizes.begin(), space.batch_sizes.end(),
                    t.params.batch_size) != space.batch_sizes.end());
    CHECK(t.params.num_epochs >= space.epochs_min);
    CHECK(t.params.num_epochs <= space.epochs_max);
    CHECK(t.params.learning_rate == 0.01);
  }
}

TEST_CASE("optimization is deterministic under a seed") {
  const auto objective = [](const HyperParams& hp) {
    return std::sin(hp.features_rate * 9.0) * 0.5 + 0.5;
  };
  const OptimizeResult a = optimize(SearchSpace{}, objective, 10, 77);
  const OptimizeResult b = optimize(SearchSpace{}, objective, 10, 77);
  REQUIRE(a.trials.size() == b.trials.size());
  for (std::size_t i = 0; i < a.trials.size(); ++i) {
    CHECK(a.trials[i].unit == b.trials[i].unit);
    CHECK(a.trials[i].score == b.trials[i].score);
  }
}

TEST_CASE("a failing objective is flagged and skipped") {
  int calls = 0;
  const auto objective = [&calls](const HyperParams&) {
    if (++calls == 3) throw std::runtime_error("trial exploded");
    return 0.2;
  };
  const OptimizeResult result = optimize(SearchSpace{}, objective, 8, 5);
  CHECK(result.trials.size() == 8);
  int failed = 0;
  for (const auto& t : result.trials) {
    if (t.failed) {
      ++failed;
      CHECK(t.score == 0.0);
    }
  }
  CHECK(failed == 1);
}

TEST_CASE("the best returned score is the max over trials") {
  const auto objective = [](const HyperParams& hp) {
    return 0.3 + 0.01 * hp.depth;
  };
  const OptimizeResult result = optimize(SearchSpace{}, objective, 9, 2);
  double best = -1.0;
  for (const auto& t : result.trials) best = std::max(best, t.score);
  CHECK(result.best_score == best);
}

TEST_CASE("dndt spaces pin the tree count to one") {
  SearchSpace space;
  space.tune_num_trees = false;
  const auto objective = [](const HyperParams& hp) {
    return hp.num_trees == 1 ? 0.9 : 0.0;
  };
  const OptimizeResult result = optimize(space, objective, 6, 4);
  for (const auto& t : result.trials) CHECK(t.params.num_trees == 1);
}

TEST_SUITE_END();
