#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <unistd.h>

#include "coughdx/core/error.hpp"
#include "coughdx/dataset/feature_matrix.hpp"
#include "coughdx/dataset/manifest.hpp"
#include "support/synthetic.hpp"

using namespace coughdx;

namespace {

namespace fs = std::filesystem;

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("coughdx_test_" + std::to_string(::getpid()) + "_" +
            std::to_string(counter()++));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  static int& counter() {
    static int c = 0;
    return c;
  }
  std::string file(const std::string& name) const {
    return (path / name).string();
  }
};

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  out << text;
}

void write_bytes(const std::string& path, const std::vector<std::uint8_t>& b) {
  std::ofstream out(path, std::ios::binary);
  out.write(reinterpret_cast<const char*>(b.data()),
            static_cast<std::streamsize>(b.size()));
}

// A manifest with the requested class counts; files need not exist.
std::vector<SampleRecord> counted_manifest(const std::string& dataset,
                                           int positives, int negatives) {
  std::vector<SampleRecord> records;
  for (int i = 0; i < positives; ++i) {
    records.push_back({"pos_" + std::to_string(i) + ".wav", Label::positive,
                       dataset, dataset + "_p" + std::to_string(i)});
  }
  for (int i = 0; i < negatives; ++i) {
    records.push_back({"neg_" + std::to_string(i) + ".wav", Label::negative,
                       dataset, dataset + "_n" + std::to_string(i)});
  }
  return records;
}

int count_label(const std::vector<SampleRecord>& records, Label label) {
  int n = 0;
  for (const auto& r : records) n += r.label == label ? 1 : 0;
  return n;
}

}  // namespace

TEST_SUITE_BEGIN("dataset");

TEST_CASE("load_manifest parses well-formed rows") {
  TempDir dir;
  const std::string path = dir.file("m.csv");
  write_file(path,
             "path,label,dataset,clip_id\n"
             "a.wav,positive,virufy,c1\n"
             "b.wav,NEGATIVE,virufy,c2\n"
             "c.wav,1,virufy,c3\n");
  const auto records = load_manifest(path);
  REQUIRE(records.size() == 3);
  CHECK(records[0].label == Label::positive);
  CHECK(records[1].label == Label::negative);
  CHECK(records[2].label == Label::positive);
  CHECK(records[1].dataset == "virufy");
}

TEST_CASE("load_manifest names the row of a bad label") {
  TempDir dir;
  const std::string path = dir.file("m.csv");
  write_file(path,
             "path,label,dataset,clip_id\n"
             "a.wav,positive,virufy,c1\n"
             "b.wav,maybe,virufy,c2\n");
  try {
    load_manifest(path);
    FAIL("expected error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::parse);
    CHECK(std::string(e.what()).find("row 2") != std::string::npos);
  }
}

TEST_CASE("load_manifest rejects duplicate clip ids") {
  TempDir dir;
  const std::string path = dir.file("m.csv");
  write_file(path,
             "path,label,dataset,clip_id\n"
             "a.wav,positive,virufy,same\n"
             "b.wav,negative,virufy,same\n");
  try {
    load_manifest(path);
    FAIL("expected error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::integrity);
  }
}

TEST_CASE("load_manifest rejects unknown dataset ids") {
  TempDir dir;
  const std::string path = dir.file("m.csv");
  write_file(path,
             "path,label,dataset,clip_id\n"
             "a.wav,positive,mystery,c1\n");
  try {
    load_manifest(path);
    FAIL("expected error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::parse);
  }
}

TEST_CASE("a Virufy-sized manifest mirrors the reference counts") {
  TempDir dir;
  const std::string path = dir.file("virufy.csv");
  write_manifest(path, counted_manifest("virufy", 48, 73));
  const auto records = load_manifest(path);
  CHECK(records.size() == 121);
  CHECK(count_label(records, Label::positive) == 48);
  CHECK(count_label(records, Label::negative) == 73);
}

TEST_CASE("manifest writing round-trips records exactly") {
  TempDir dir;
  const std::string path = dir.file("m.csv");
  std::vector<SampleRecord> records = counted_manifest("coswara", 3, 4);
  records[0].path = "dir with,comma/clip \"x\".wav";
  write_manifest(path, records);
  const auto loaded = load_manifest(path);
  REQUIRE(loaded.size() == records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    CHECK(loaded[i].path == records[i].path);
    CHECK(loaded[i].label == records[i].label);
    CHECK(loaded[i].dataset == records[i].dataset);
    CHECK(loaded[i].clip_id == records[i].clip_id);
  }
}

TEST_CASE("build_combined reproduces the reference totals") {
  std::vector<std::vector<SampleRecord>> manifests;
  manifests.push_back(counted_manifest("cambridge_asym", 141, 298));
  manifests.push_back(counted_manifest("cambridge_sym", 54, 32));
  manifests.push_back(counted_manifest("coswara", 185, 1134));
  manifests.push_back(counted_manifest("coughvid", 680, 680));
  manifests.push_back(counted_manifest("virufy", 48, 73));
  manifests.push_back(counted_manifest("nococoda", 73, 0));
  const auto combined = build_combined(manifests);
  CHECK(combined.size() == 3398);
  CHECK(count_label(combined, Label::positive) == 1181);
  CHECK(count_label(combined, Label::negative) == 2217);
}

TEST_CASE("combining Virufy with NoCoCoDa yields 121/73") {
  std::vector<std::vector<SampleRecord>> manifests;
  manifests.push_back(counted_manifest("virufy", 48, 73));
  manifests.push_back(counted_manifest("nococoda", 73, 0));
  const auto combined = build_combined(manifests);
  CHECK(combined.size() == 194);
  CHECK(count_label(combined, Label::positive) == 121);
  CHECK(count_label(combined, Label::negative) == 73);
}

TEST_CASE("build_combined of nothing is empty") {
  CHECK(build_combined({}).empty());
}

TEST_CASE("combined counts are the sums of constituent counts") {
  Rng rng(99);
  const std::vector<std::string> ids = {"coswara", "coughvid", "virufy"};
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<std::vector<SampleRecord>> manifests;
    int want_pos = 0, want_neg = 0;
    for (std::size_t d = 0; d < ids.size(); ++d) {
      const int pos = static_cast<int>(rng.uniform_int(40));
      const int neg = static_cast<int>(rng.uniform_int(40));
      want_pos += pos;
      want_neg += neg;
      manifests.push_back(counted_manifest(ids[d], pos, neg));
    }
    const auto combined = build_combined(manifests);
    CHECK(count_label(combined, Label::positive) == want_pos);
    CHECK(count_label(combined, Label::negative) == want_neg);
    CHECK(static_cast<int>(combined.size()) == want_pos + want_neg);
  }
}

TEST_CASE("build_combined rejects collisions after prefixing") {
  std::vector<std::vector<SampleRecord>> manifests;
  manifests.push_back({{"a.wav", Label::positive, "virufy", "x"}});
  manifests.push_back({{"b.wav", Label::negative, "virufy", "x"}});
  try {
    build_combined(manifests);
    FAIL("expected error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::integrity);
  }
}

TEST_CASE("build_combined keeps dataset identity and prefixes clip ids") {
  std::vector<std::vector<SampleRecord>> manifests;
  manifests.push_back({{"a.wav", Label::positive, "virufy", "x"}});
  const auto combined = build_combined(manifests);
  REQUIRE(combined.size() == 1);
  CHECK(combined[0].dataset == "virufy");
  CHECK(combined[0].clip_id == "virufy/x");
}

TEST_CASE("materialize extracts, caches and replays bit-identically") {
  TempDir dir;
  const std::string wav_a = dir.file("a.wav");
  const std::string wav_b = dir.file("b.wav");
  write_bytes(wav_a, synthetic::wav_bytes({synthetic::sine(350.0, 22050, 0.4)},
                                          22050));
  write_bytes(wav_b, synthetic::wav_bytes({synthetic::noise(9000, 77)}, 22050));

  std::vector<SampleRecord> manifest = {
      {wav_a, Label::positive, "virufy", "a"},
      {wav_b, Label::negative, "virufy", "b"},
  };
  const std::string cache = dir.file("features.csv");
  const FeatureMatrix fm = materialize(manifest, cache);
  CHECK(fm.n_rows() == 2);
  CHECK(fm.x.cols == 193);
  CHECK(fm.labels == std::vector<int>({1, 0}));
  CHECK(fs::exists(cache));

  // Remove the audio: the cache alone must reproduce the matrix bit for bit.
  fs::remove(wav_a);
  fs::remove(wav_b);
  const FeatureMatrix replay = materialize(manifest, cache);
  CHECK(replay.x.v == fm.x.v);
  CHECK(replay.labels == fm.labels);
  CHECK(replay.clip_ids == fm.clip_ids);
}

TEST_CASE("materialize reports every missing file") {
  TempDir dir;
  std::vector<SampleRecord> manifest = {
      {dir.file("missing1.wav"), Label::positive, "virufy", "m1"},
      {dir.file("missing2.wav"), Label::negative, "virufy", "m2"},
  };
  try {
    materialize(manifest, dir.file("cache.csv"));
    FAIL("expected error");
  } catch (const Error& e) {
    const std::string what = e.what();
    CHECK(what.find("missing1.wav") != std::string::npos);
    CHECK(what.find("missing2.wav") != std::string::npos);
  }
}

TEST_CASE("feature CSV round-trips doubles exactly") {
  TempDir dir;
  FeatureMatrix fm;
  fm.x = Matrix(2, 193);
  Rng rng(123);
  for (double& v : fm.x.v) v = rng.normal() * 1e3;
  fm.x.at(0, 0) = 0.1;  // not exactly representable
  fm.x.at(1, 192) = -1.0 / 3.0;
  fm.labels = {1, 0};
  fm.groups = {"coswara", "coswara"};
  fm.clip_ids = {"c1", "c2"};
  const std::string path = dir.file("f.csv");
  write_feature_csv(path, fm);
  const FeatureMatrix loaded = load_feature_csv(path);
  CHECK(loaded.x.v == fm.x.v);
  CHECK(loaded.labels == fm.labels);
  CHECK(loaded.groups == fm.groups);
  CHECK(loaded.clip_ids == fm.clip_ids);
}

TEST_SUITE_END();
