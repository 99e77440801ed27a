#include "coughdx/dataset/manifest.hpp"

#include <algorithm>
#include <fstream>
#include <unordered_set>

#include "coughdx/core/csv.hpp"
#include "coughdx/core/error.hpp"

namespace coughdx {

const std::array<std::string, 8>& dataset_ids() {
  static const std::array<std::string, 8> ids = {
      "cambridge_asym", "cambridge_sym",   "coswara",  "coughvid",
      "virufy",         "nococoda",        "virufy_nococoda", "combined"};
  return ids;
}

Label parse_label(const std::string& token) {
  std::string t;
  for (char c : token) t.push_back(static_cast<char>(std::tolower(c)));
  if (t == "positive" || t == "1") return Label::positive;
  if (t == "negative" || t == "0") return Label::negative;
  raise(ErrorCode::parse, "unknown label token '" + token + "'");
}

std::vector<SampleRecord> load_manifest(const std::string& path) {
  const auto rows = read_csv(path);
  require(!rows.empty(), ErrorCode::parse, "empty manifest " + path);
  require(rows[0] == std::vector<std::string>({"path", "label", "dataset",
                                               "clip_id"}),
          ErrorCode::parse, "manifest header must be path,label,dataset,clip_id");

  const auto& ids = dataset_ids();
  std::vector<SampleRecord> records;
  std::unordered_set<std::string> seen;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    require(row.size() == 4, ErrorCode::parse,
            "row " + std::to_string(r) + ": expected 4 fields");
    SampleRecord rec;
    rec.path = row[0];
    try {
      rec.label = parse_label(row[1]);
    } catch (const Error&) {
      raise(ErrorCode::parse,
            "row " + std::to_string(r) + ": unknown label '" + row[1] + "'");
    }
    rec.dataset = row[2];
    require(std::find(ids.begin(), ids.end(), rec.dataset) != ids.end(),
            ErrorCode::parse,
            "row " + std::to_string(r) + ": unknown dataset '" + row[2] + "'");
    rec.clip_id = row[3];
    require(!rec.clip_id.empty(), ErrorCode::parse,
            "row " + std::to_string(r) + ": empty clip_id");
    require(seen.insert(rec.clip_id).second, ErrorCode::integrity,
            "duplicate clip_id '" + rec.clip_id + "'");
    records.push_back(std::move(rec));
  }
  return records;
}

void write_manifest(const std::string& path,
                    const std::vector<SampleRecord>& records) {
  std::ofstream out(path);
  require(out.good(), ErrorCode::io, "cannot write " + path);
  out << "path,label,dataset,clip_id\n";
  for (const auto& r : records) {
    out << csv_escape(r.path) << ','
        << (r.label == Label::positive ? "positive" : "negative") << ','
        << csv_escape(r.dataset) << ',' << csv_escape(r.clip_id) << '\n';
  }
}

std::vector<SampleRecord> build_combined(
    const std::vector<std::vector<SampleRecord>>& manifests) {
  std::vector<SampleRecord> combined;
  std::unordered_set<std::string> seen;
  for (const auto& manifest : manifests) {
    for (const auto& rec : manifest) {
      SampleRecord out = rec;
      out.clip_id = rec.dataset + "/" + rec.clip_id;
      require(seen.insert(out.clip_id).second, ErrorCode::integrity,
              "clip_id collision after prefixing: '" + out.clip_id + "'");
      combined.push_back(std::move(out));
    }
  }
  return combined;
}

}  // namespace coughdx
