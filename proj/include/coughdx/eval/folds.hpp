#pragma once

#include <cstdint>
#include <vector>

namespace coughdx {

struct FoldPlan {
  int k = 0;
  std::vector<int> assignments;  // fold index per sample
  std::uint64_t seed = 0;

  std::vector<std::size_t> test_rows(int fold) const;
  std::vector<std::size_t> train_rows(int fold) const;
};

// Within each class, shuffle by seed and deal round-robin into k folds, so
// per-fold class counts differ from perfect proportionality by at most 1.
FoldPlan stratified_kfold(const std::vector<int>& y, int k, std::uint64_t seed);

}  // namespace coughdx
