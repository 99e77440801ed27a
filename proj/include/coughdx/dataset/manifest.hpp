#pragma once

#include <array>
#include <string>
#include <vector>

namespace coughdx {

enum class Label : int { negative = 0, positive = 1 };

struct SampleRecord {
  std::string path;
  Label label = Label::negative;
  std::string dataset;
  std::string clip_id;
};

const std::array<std::string, 8>& dataset_ids();

// Parses "positive"/"negative"/"1"/"0" (case-insensitive).
Label parse_label(const std::string& token);

// CSV with header path,label,dataset,clip_id. Unknown labels or dataset ids
// raise a parse error naming the row; duplicate clip_ids raise an integrity
// error.
std::vector<SampleRecord> load_manifest(const std::string& path);

void write_manifest(const std::string& path,
                    const std::vector<SampleRecord>& records);

// Concatenation with clip_ids prefixed by their dataset id; collisions after
// prefixing raise an integrity error.
std::vector<SampleRecord> build_combined(
    const std::vector<std::vector<SampleRecord>>& manifests);

}  // namespace coughdx
