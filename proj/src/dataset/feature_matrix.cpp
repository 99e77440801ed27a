#include "coughdx/dataset/feature_matrix.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <unordered_map>

#include "coughdx/audio/resample.hpp"
#include "coughdx/audio/wav.hpp"
#include "coughdx/core/csv.hpp"
#include "coughdx/core/error.hpp"
#include "coughdx/features/extract.hpp"

namespace coughdx {

namespace {

std::vector<std::string> cache_header() {
  std::vector<std::string> h;
  h.reserve(kNumFeatures + 3);
  for (int i = 0; i < kNumFeatures; ++i) {
    char buf[8];
    std::snprintf(buf, sizeof(buf), "f%03d", i);
    h.emplace_back(buf);
  }
  h.emplace_back("label");
  h.emplace_back("dataset");
  h.emplace_back("clip_id");
  return h;
}

double parse_double(const std::string& s, std::size_t row) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  require(end != s.c_str() && *end == '\0' && std::isfinite(v), ErrorCode::parse,
          "row " + std::to_string(row) + ": bad feature value '" + s + "'");
  return v;
}

}  // namespace

FeatureMatrix load_feature_csv(const std::string& path) {
  const auto rows = read_csv(path);
  require(!rows.empty(), ErrorCode::parse, "empty feature file " + path);
  require(rows[0] == cache_header(), ErrorCode::parse,
          "feature CSV header mismatch in " + path);

  FeatureMatrix fm;
  const std::size_t n = rows.size() - 1;
  fm.x = Matrix(n, kNumFeatures);
  fm.labels.resize(n);
  fm.groups.resize(n);
  fm.clip_ids.resize(n);
  for (std::size_t r = 0; r < n; ++r) {
    const auto& row = rows[r + 1];
    require(row.size() == kNumFeatures + 3, ErrorCode::parse,
            "row " + std::to_string(r + 1) + ": field count mismatch");
    for (int c = 0; c < kNumFeatures; ++c) {
      fm.x.at(r, static_cast<std::size_t>(c)) =
          parse_double(row[static_cast<std::size_t>(c)], r + 1);
    }
    fm.labels[r] = parse_label(row[kNumFeatures]) == Label::positive ? 1 : 0;
    fm.groups[r] = row[kNumFeatures + 1];
    fm.clip_ids[r] = row[kNumFeatures + 2];
  }
  return fm;
}

void write_feature_csv(const std::string& path, const FeatureMatrix& fm) {
  std::ofstream out(path);
  require(out.good(), ErrorCode::io, "cannot write " + path);
  const auto header = cache_header();
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i) out << ',';
    out << header[i];
  }
  out << '\n';
  for (std::size_t r = 0; r < fm.n_rows(); ++r) {
    for (int c = 0; c < kNumFeatures; ++c) {
      out << format_double(fm.x.at(r, static_cast<std::size_t>(c))) << ',';
    }
    out << fm.labels[r] << ',' << csv_escape(fm.groups[r]) << ','
        << csv_escape(fm.clip_ids[r]) << '\n';
  }
  require(out.good(), ErrorCode::io, "write failed for " + path);
}

FeatureMatrix materialize(const std::vector<SampleRecord>& manifest,
                          const std::string& cache_path) {
  std::unordered_map<std::string, std::size_t> cached;
  FeatureMatrix cache;
  if (!cache_path.empty() && std::filesystem::exists(cache_path)) {
    cache = load_feature_csv(cache_path);
    for (std::size_t r = 0; r < cache.n_rows(); ++r) {
      cached.emplace(cache.clip_ids[r], r);
    }
  }

  const std::size_t n = manifest.size();
  FeatureMatrix fm;
  fm.x = Matrix(n, kNumFeatures);
  fm.labels.resize(n);
  fm.groups.resize(n);
  fm.clip_ids.resize(n);

  std::vector<char> needs_audio(n, 0);
  for (std::size_t r = 0; r < n; ++r) {
    const auto& rec = manifest[r];
    fm.labels[r] = rec.label == Label::positive ? 1 : 0;
    fm.groups[r] = rec.dataset;
    fm.clip_ids[r] = rec.clip_id;
    const auto it = cached.find(rec.clip_id);
    if (it != cached.end()) {
      const double* src = cache.x.row(it->second);
      double* dst = fm.x.row(r);
      for (int c = 0; c < kNumFeatures; ++c) dst[c] = src[c];
    } else {
      needs_audio[r] = 1;
    }
  }

  std::vector<std::string> failures(n);
  bool extracted_any = false;
#pragma omp parallel for schedule(dynamic)
  for (std::size_t r = 0; r < n; ++r) {
    if (!needs_audio[r]) continue;
    try {
      const AudioClip raw = load_wav(manifest[r].path);
      const AudioClip clip = resample(raw, kPipelineSampleRate);
      const FeatureVector fv = extract_feature_vector(clip);
      double* dst = fm.x.row(r);
      for (int c = 0; c < kNumFeatures; ++c) {
        dst[c] = fv.fused[static_cast<std::size_t>(c)];
      }
    } catch (const std::exception& e) {
      failures[r] = manifest[r].path + ": " + e.what();
    }
  }

  std::string failure_report;
  for (std::size_t r = 0; r < n; ++r) {
    if (needs_audio[r]) extracted_any = true;
    if (!failures[r].empty()) {
      failure_report += "\n  " + failures[r];
    }
  }
  require(failure_report.empty(), ErrorCode::io,
          "feature extraction failed for:" + failure_report);

  if (!cache_path.empty() && (extracted_any || cache.n_rows() == 0)) {
    write_feature_csv(cache_path, fm);
  }
  return fm;
}

}  // namespace coughdx
