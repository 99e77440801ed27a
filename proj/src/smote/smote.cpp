#include "coughdx/smote/smote.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "coughdx/core/error.hpp"
#include "coughdx/core/rng.hpp"

namespace coughdx {

ResampledSet smote_resample(const Matrix& x, const std::vector<int>& y, int k,
                            std::uint64_t seed) {
  require(x.rows == y.size(), ErrorCode::argument, "row/label count mismatch");
  require(k >= 1, ErrorCode::argument, "k must be >= 1");

  std::vector<std::size_t> pos, neg;
  for (std::size_t i = 0; i < y.size(); ++i) (y[i] == 1 ? pos : neg).push_back(i);

  ResampledSet out;
  out.x = x;
  out.labels = y;
  out.synthetic_mask.assign(x.rows, 0);
  if (pos.size() == neg.size()) return out;

  const bool pos_is_minority = pos.size() < neg.size();
  const auto& minority = pos_is_minority ? pos : neg;
  const std::size_t need =
      (pos_is_minority ? neg.size() : pos.size()) - minority.size();
  const int minority_label = pos_is_minority ? 1 : 0;
  require(minority.size() > static_cast<std::size_t>(k), ErrorCode::insufficient_data,
          "minority class needs more than k=" + std::to_string(k) + " samples");

  // k nearest minority neighbours per minority row (Euclidean, ties by index).
  const std::size_t n_min = minority.size();
  std::vector<std::vector<std::size_t>> neighbours(n_min);
#pragma omp parallel for schedule(static)
  for (std::size_t i = 0; i < n_min; ++i) {
    std::vector<std::pair<double, std::size_t>> dists;
    dists.reserve(n_min - 1);
    const double* xi = x.row(minority[i]);
    for (std::size_t j = 0; j < n_min; ++j) {
      if (j == i) continue;
      const double* xj = x.row(minority[j]);
      double d2 = 0.0;
      for (std::size_t c = 0; c < x.cols; ++c) {
        const double diff = xi[c] - xj[c];
        d2 += diff * diff;
      }
      dists.emplace_back(d2, j);
    }
    std::sort(dists.begin(), dists.end());
    neighbours[i].reserve(static_cast<std::size_t>(k));
    for (int t = 0; t < k; ++t) neighbours[i].push_back(dists[static_cast<std::size_t>(t)].second);
  }

  Rng rng(seed);
  const std::size_t base_rows = x.rows;
  out.x.v.resize((base_rows + need) * x.cols);
  out.x.rows = base_rows + need;
  out.labels.resize(base_rows + need, minority_label);
  out.synthetic_mask.resize(base_rows + need, 1);

  for (std::size_t s = 0; s < need; ++s) {
    const std::size_t i = s % n_min;  // round-robin over minority rows
    const std::size_t nn = neighbours[i][rng.uniform_int(static_cast<std::uint64_t>(k))];
    const double lambda = rng.uniform();
    const double* xi = x.row(minority[i]);
    const double* xn = x.row(minority[nn]);
    double* dst = out.x.row(base_rows + s);
    for (std::size_t c = 0; c < x.cols; ++c) {
      dst[c] = xi[c] + lambda * (xn[c] - xi[c]);
    }
  }
  return out;
}

}  // namespace coughdx
