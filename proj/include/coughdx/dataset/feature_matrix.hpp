#pragma once

#include <string>
#include <vector>

#include "coughdx/core/matrix.hpp"
#include "coughdx/dataset/manifest.hpp"

namespace coughdx {

// Aligned feature rows, labels and provenance for a manifest.
struct FeatureMatrix {
  Matrix x;                            // n x 193
  std::vector<int> labels;             // 0/1
  std::vector<std::string> groups;     // dataset ids
  std::vector<std::string> clip_ids;

  std::size_t n_rows() const { return x.rows; }
};

// Feature cache CSV: header f000..f192,label,dataset,clip_id, one row per
// clip, '.' decimal separator, values formatted to round-trip exactly.
FeatureMatrix load_feature_csv(const std::string& path);
void write_feature_csv(const std::string& path, const FeatureMatrix& fm);

// Extract (or load cached) features for every record; rows follow manifest
// order and the cache is written back. If any record fails, the whole
// operation fails listing every failed path.
FeatureMatrix materialize(const std::vector<SampleRecord>& manifest,
                          const std::string& cache_path);

}  // namespace coughdx
