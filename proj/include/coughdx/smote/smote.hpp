#pragma once

#include <cstdint>
#include <vector>

#include "coughdx/core/matrix.hpp"

namespace coughdx {

struct ResampledSet {
  Matrix x;
  std::vector<int> labels;
  std::vector<char> synthetic_mask;  // per output row
};

// Synthetic minority over-sampling: each needed synthetic row interpolates a
// minority row (taken round-robin) toward one of its k nearest minority
// neighbours with lambda ~ U[0,1], until the classes are balanced. Original
// rows are passed through unmodified; balanced input comes back unchanged.
ResampledSet smote_resample(const Matrix& x, const std::vector<int>& y, int k,
                            std::uint64_t seed);

}  // namespace coughdx
