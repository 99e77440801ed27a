#include "coughdx/eval/folds.hpp"

#include <map>
#include <string>

#include "coughdx/core/error.hpp"
#include "coughdx/core/rng.hpp"

namespace coughdx {

std::vector<std::size_t> FoldPlan::test_rows(int fold) const {
  std::vector<std::size_t> rows;
  for (std::size_t i = 0; i < assignments.size(); ++i) {
    if (assignments[i] == fold) rows.push_back(i);
  }
  return rows;
}

std::vector<std::size_t> FoldPlan::train_rows(int fold) const {
  std::vector<std::size_t> rows;
  for (std::size_t i = 0; i < assignments.size(); ++i) {
    if (assignments[i] != fold) rows.push_back(i);
  }
  return rows;
}

FoldPlan stratified_kfold(const std::vector<int>& y, int k, std::uint64_t seed) {
  require(k >= 2, ErrorCode::argument,
          "stratified k-fold needs k >= 2, got " + std::to_string(k));
  require(!y.empty(), ErrorCode::argument, "empty label vector");

  std::map<int, std::vector<std::size_t>> by_class;
  for (std::size_t i = 0; i < y.size(); ++i) by_class[y[i]].push_back(i);
  for (const auto& [cls, rows] : by_class) {
    require(rows.size() >= static_cast<std::size_t>(k), ErrorCode::argument,
            "class " + std::to_string(cls) + " has fewer members than folds");
  }

  FoldPlan plan;
  plan.k = k;
  plan.seed = seed;
  plan.assignments.assign(y.size(), -1);
  Rng rng(seed);
  for (auto& [cls, rows] : by_class) {
    rng.shuffle(rows);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      plan.assignments[rows[i]] = static_cast<int>(i % static_cast<std::size_t>(k));
    }
  }
  return plan;
}

}  // namespace coughdx
