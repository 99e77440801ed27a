#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "coughdx/neural/forest.hpp"

namespace coughdx {

// Per-dimension bounds; points are handled on the unit hypercube with
// nearest-valid rounding at evaluation time. The learning rate is fixed.
// Degenerate axes (equal bounds, a single batch size, a pinned tree count)
// are invisible to the optimizer.
struct SearchSpace {
  int trees_min = 5, trees_max = 50;
  int depth_min = 3, depth_max = 16;
  double rate_min = 0.5, rate_max = 1.0;
  std::vector<int> batch_sizes{8, 16, 32, 64, 128, 256};
  int epochs_min = 5, epochs_max = 50;
  double learning_rate = 0.01;
  bool tune_num_trees = true;  // false pins num_trees to 1

  void validate() const;
  int dims() const;  // number of active axes
  HyperParams decode(const std::vector<double>& unit) const;
};

struct TrialRecord {
  HyperParams params;
  double score = 0.0;
  std::uint64_t seed = 0;
  bool failed = false;
  std::vector<double> unit;  // normalized coordinates used by the surrogate
};

// EI for maximization: (mu - best) * Phi(z) + s * phi(z); zero when s = 0.
double expected_improvement(double mean, double variance, double best_so_far);

struct OptimizeResult {
  HyperParams best;
  double best_score = 0.0;
  std::vector<TrialRecord> trials;
};

// Five Latin-hypercube trials, then rounds of: fit the GP on every trial,
// score 512 uniform candidates by expected improvement, evaluate the argmax.
// A failing objective records a flagged score-0 trial and the search moves
// on. Returns the trial with the highest score.
OptimizeResult optimize(const SearchSpace& space,
                        const std::function<double(const HyperParams&)>& objective,
                        int budget, std::uint64_t seed);

std::string trial_to_json(const TrialRecord& trial);

}  // namespace coughdx
