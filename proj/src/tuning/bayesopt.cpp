#include "coughdx/tuning/bayesopt.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "coughdx/core/error.hpp"
#include "coughdx/core/rng.hpp"
#include "coughdx/tuning/gp.hpp"

namespace coughdx {

namespace {

constexpr int kInitialTrials = 5;
constexpr int kCandidatesPerRound = 512;

int round_in(double u, int lo, int hi) {
  const int v = lo + static_cast<int>(std::lround(u * (hi - lo)));
  return std::clamp(v, lo, hi);
}

}  // namespace

void SearchSpace::validate() const {
  require(trees_min >= 1 && trees_min <= trees_max, ErrorCode::argument,
          "bad num_trees bounds");
  require(depth_min >= 1 && depth_min <= depth_max && depth_max <= 16,
          ErrorCode::argument, "bad depth bounds");
  require(rate_min > 0.0 && rate_min <= rate_max && rate_max <= 1.0,
          ErrorCode::argument, "bad features_rate bounds");
  require(!batch_sizes.empty(), ErrorCode::argument, "no batch sizes");
  require(epochs_min >= 0 && epochs_min <= epochs_max, ErrorCode::argument,
          "bad num_epochs bounds");
  require(learning_rate > 0.0, ErrorCode::argument, "bad learning rate");
}

int SearchSpace::dims() const {
  int n = 0;
  n += (tune_num_trees && trees_min < trees_max) ? 1 : 0;
  n += depth_min < depth_max ? 1 : 0;
  n += rate_min < rate_max ? 1 : 0;
  n += batch_sizes.size() > 1 ? 1 : 0;
  n += epochs_min < epochs_max ? 1 : 0;
  return n;
}

HyperParams SearchSpace::decode(const std::vector<double>& unit) const {
  require(static_cast<int>(unit.size()) == dims(), ErrorCode::argument,
          "point dimensionality mismatch");
  HyperParams hp;
  std::size_t i = 0;
  if (!tune_num_trees) {
    hp.num_trees = 1;
  } else {
    hp.num_trees = trees_min < trees_max
                       ? round_in(unit[i++], trees_min, trees_max)
                       : trees_min;
  }
  hp.depth = depth_min < depth_max ? round_in(unit[i++], depth_min, depth_max)
                                   : depth_min;
  hp.features_rate =
      rate_min < rate_max
          ? std::clamp(rate_min + unit[i++] * (rate_max - rate_min), rate_min,
                       rate_max)
          : rate_min;
  hp.batch_size =
      batch_sizes.size() > 1
          ? batch_sizes[static_cast<std::size_t>(round_in(
                unit[i++], 0, static_cast<int>(batch_sizes.size()) - 1))]
          : batch_sizes[0];
  hp.num_epochs = epochs_min < epochs_max
                      ? round_in(unit[i++], epochs_min, epochs_max)
                      : epochs_min;
  hp.learning_rate = learning_rate;
  return hp;
}

double expected_improvement(double mean, double variance, double best_so_far) {
  require(variance >= 0.0, ErrorCode::argument, "negative variance");
  if (variance == 0.0) return 0.0;
  const double s = std::sqrt(variance);
  const double z = (mean - best_so_far) / s;
  const double cdf = 0.5 * std::erfc(-z / std::sqrt(2.0));
  const double pdf = std::exp(-0.5 * z * z) / std::sqrt(2.0 * 3.14159265358979323846);
  return std::max(0.0, (mean - best_so_far) * cdf + s * pdf);
}

OptimizeResult optimize(const SearchSpace& space,
                        const std::function<double(const HyperParams&)>& objective,
                        int budget, std::uint64_t seed) {
  require(budget >= kInitialTrials, ErrorCode::argument,
          "budget must be >= 5 trials");
  space.validate();

  const int d = space.dims();
  require(d >= 1, ErrorCode::argument, "search space has no free axis");
  Rng rng(derive_seed(seed, 0xb0));
  OptimizeResult result;
  result.trials.reserve(static_cast<std::size_t>(budget));

  auto run_trial = [&](const std::vector<double>& unit) {
    TrialRecord trial;
    trial.unit = unit;
    trial.params = space.decode(unit);
    trial.seed = derive_seed(seed, 0x7a1a, result.trials.size());
    try {
      trial.score = objective(trial.params);
    } catch (const std::exception&) {
      trial.score = 0.0;
      trial.failed = true;
    }
    result.trials.push_back(std::move(trial));
  };

  // Space-filling start: one stratified interval per dimension, permuted.
  std::vector<std::vector<int>> perms(static_cast<std::size_t>(d));
  for (auto& p : perms) {
    p.resize(kInitialTrials);
    for (int i = 0; i < kInitialTrials; ++i) p[static_cast<std::size_t>(i)] = i;
    rng.shuffle(p);
  }
  for (int i = 0; i < kInitialTrials; ++i) {
    std::vector<double> unit(static_cast<std::size_t>(d));
    for (int j = 0; j < d; ++j) {
      unit[static_cast<std::size_t>(j)] =
          (perms[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] +
           rng.uniform()) /
          kInitialTrials;
    }
    run_trial(unit);
  }

  for (int round = kInitialTrials; round < budget; ++round) {
    std::vector<std::vector<double>> points;
    std::vector<double> scores;
    double best = -1.0;
    std::size_t incumbent = 0;
    for (std::size_t i = 0; i < result.trials.size(); ++i) {
      points.push_back(result.trials[i].unit);
      scores.push_back(result.trials[i].score);
      if (result.trials[i].score > best) {
        best = result.trials[i].score;
        incumbent = i;
      }
    }

    (void)incumbent;
    std::vector<double> best_candidate;
    double best_ei = -1.0;
    for (int c = 0; c < kCandidatesPerRound; ++c) {
      std::vector<double> unit(static_cast<std::size_t>(d));
      for (double& u : unit) u = rng.uniform();
      const GpPrediction pred = gp_posterior(points, scores, unit);
      const double ei = expected_improvement(pred.mean, pred.variance, best);
      if (ei > best_ei) {
        best_ei = ei;
        best_candidate = std::move(unit);
      }
    }
    run_trial(best_candidate);
  }

  std::size_t best_idx = 0;
  for (std::size_t i = 1; i < result.trials.size(); ++i) {
    if (result.trials[i].score > result.trials[best_idx].score) best_idx = i;
  }
  result.best = result.trials[best_idx].params;
  result.best_score = result.trials[best_idx].score;
  return result;
}

std::string trial_to_json(const TrialRecord& trial) {
  nlohmann::json j;
  j["params"] = {{"num_trees", trial.params.num_trees},
                 {"depth", trial.params.depth},
                 {"features_rate", trial.params.features_rate},
                 {"learning_rate", trial.params.learning_rate},
                 {"batch_size", trial.params.batch_size},
                 {"num_epochs", trial.params.num_epochs}};
  j["score"] = trial.score;
  j["seed"] = trial.seed;
  j["failed"] = trial.failed;
  return j.dump();
}

}  // namespace coughdx
