#include <doctest.h>

#include <cmath>

#include "coughdx/core/error.hpp"
#include "coughdx/core/rng.hpp"
#include "coughdx/smote/smote.hpp"

using namespace coughdx;

namespace {

// Solve lambda from the first coordinate where base and neighbour differ and
// check every other coordinate against it.
bool on_segment(const double* synth, const double* base, const double* nn,
                std::size_t d, double tol) {
  double lambda = -1.0;
  for (std::size_t c = 0; c < d; ++c) {
    const double span = nn[c] - base[c];
    if (std::abs(span) > 1e-12) {
      lambda = (synth[c] - base[c]) / span;
      break;
    }
  }
  if (lambda < -tol || lambda > 1.0 + tol) return false;
  for (std::size_t c = 0; c < d; ++c) {
    const double expected = base[c] + lambda * (nn[c] - base[c]);
    if (std::abs(synth[c] - expected) > tol) return false;
  }
  return true;
}

// Validate one synthetic row against every (minority base, minority
// neighbour) pair; the true pair is unknown to the test, any match suffices.
bool segment_property(const ResampledSet& rs, const Matrix& x,
                      const std::vector<int>& y, int minority_label,
                      std::size_t row, double tol = 1e-9) {
  std::vector<std::size_t> minority;
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (y[i] == minority_label) minority.push_back(i);
  }
  const double* synth = rs.x.row(row);
  for (std::size_t a : minority) {
    for (std::size_t b : minority) {
      if (a == b) continue;
      if (on_segment(synth, x.row(a), x.row(b), x.cols, tol)) return true;
    }
  }
  return false;
}

}  // namespace

TEST_SUITE_BEGIN("smote");

TEST_CASE("one synthetic point lies on the diagonal segment") {
  Matrix x(5, 2);
  std::vector<int> y{1, 1, 0, 0, 0};
  x.at(0, 0) = 0.0;
  x.at(0, 1) = 0.0;
  x.at(1, 0) = 2.0;
  x.at(1, 1) = 2.0;
  for (std::size_t r = 2; r < 5; ++r) {
    x.at(r, 0) = 10.0 + static_cast<double>(r);
    x.at(r, 1) = -5.0;
  }
  const ResampledSet rs = smote_resample(x, y, 1, 42);
  REQUIRE(rs.x.rows == 6);
  const double a = rs.x.at(5, 0);
  const double b = rs.x.at(5, 1);
  CHECK(a == b);  // on the line y = x
  CHECK(a >= 0.0);
  CHECK(a <= 2.0);
  CHECK(rs.labels[5] == 1);
  CHECK(rs.synthetic_mask[5] == 1);
}

TEST_CASE("balanced input is returned unchanged") {
  Matrix x(4, 3);
  Rng rng(7);
  for (double& v : x.v) v = rng.normal();
  const std::vector<int> y{1, 0, 1, 0};
  const ResampledSet rs = smote_resample(x, y, 1, 9);
  CHECK(rs.x.v == x.v);
  CHECK(rs.labels == y);
  for (char m : rs.synthetic_mask) CHECK(m == 0);
}

TEST_CASE("Coswara-shaped counts balance to 1134/1134") {
  Rng rng(3);
  Matrix x(1319, 4);
  std::vector<int> y(1319, 0);
  for (int i = 0; i < 185; ++i) y[static_cast<std::size_t>(i)] = 1;
  for (double& v : x.v) v = rng.normal();
  const ResampledSet rs = smote_resample(x, y, 5, 11);
  std::size_t pos = 0, neg = 0;
  for (int v : rs.labels) (v == 1 ? pos : neg)++;
  CHECK(pos == 1134);
  CHECK(neg == 1134);
}

TEST_CASE("seeded runs satisfy counts, segments and originals") {
  Rng data_rng(55);
  Matrix x(60, 5);
  std::vector<int> y(60);
  for (std::size_t i = 0; i < 60; ++i) y[i] = i < 14 ? 1 : 0;
  for (double& v : x.v) v = data_rng.normal();

  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const ResampledSet rs = smote_resample(x, y, 5, seed);
    std::size_t pos = 0, neg = 0;
    for (int v : rs.labels) (v == 1 ? pos : neg)++;
    CHECK(pos == neg);

    // Originals first, unmodified.
    for (std::size_t r = 0; r < x.rows; ++r) {
      CHECK(rs.synthetic_mask[r] == 0);
      for (std::size_t c = 0; c < x.cols; ++c) {
        CHECK(rs.x.at(r, c) == x.at(r, c));
      }
    }
    for (std::size_t r = x.rows; r < rs.x.rows; ++r) {
      CHECK(rs.synthetic_mask[r] == 1);
      CHECK(segment_property(rs, x, y, 1, r));
    }
  }
}

TEST_CASE("identical seeds reproduce identical output") {
  Rng data_rng(8);
  Matrix x(30, 3);
  std::vector<int> y(30);
  for (std::size_t i = 0; i < 30; ++i) y[i] = i < 9 ? 1 : 0;
  for (double& v : x.v) v = data_rng.normal();
  const ResampledSet a = smote_resample(x, y, 3, 1234);
  const ResampledSet b = smote_resample(x, y, 3, 1234);
  const ResampledSet c = smote_resample(x, y, 3, 4321);
  CHECK(a.x.v == b.x.v);
  CHECK(a.x.v != c.x.v);
}

TEST_CASE("a minority no larger than k is rejected") {
  Matrix x(10, 2);
  std::vector<int> y(10, 0);
  y[0] = 1;
  y[1] = 1;
  try {
    smote_resample(x, y, 2, 5);
    FAIL("expected error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::insufficient_data);
  }
}

TEST_SUITE_END();
