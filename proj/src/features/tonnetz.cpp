#include "coughdx/features/tonnetz.hpp"

#include <cmath>

#include "coughdx/core/error.hpp"

namespace coughdx {

const Matrix& tonnetz_transform() {
  static const Matrix phi = [] {
    constexpr double kPi = 3.14159265358979323846;
    constexpr double r1 = 1.0, r2 = 1.0, r3 = 0.5;
    Matrix m(6, 12);
    for (int l = 0; l < 12; ++l) {
      const std::size_t c = static_cast<std::size_t>(l);
      m.at(0, c) = r1 * std::sin(l * 7.0 * kPi / 6.0);
      m.at(1, c) = r1 * std::cos(l * 7.0 * kPi / 6.0);
      m.at(2, c) = r2 * std::sin(l * 3.0 * kPi / 2.0);
      m.at(3, c) = r2 * std::cos(l * 3.0 * kPi / 2.0);
      m.at(4, c) = r3 * std::sin(l * 2.0 * kPi / 3.0);
      m.at(5, c) = r3 * std::cos(l * 2.0 * kPi / 3.0);
    }
    return m;
  }();
  return phi;
}

Matrix tonnetz(const Matrix& chroma) {
  require(chroma.rows == 12, ErrorCode::argument, "chroma must have 12 rows");
  for (double x : chroma.v) {
    require(x >= 0.0, ErrorCode::argument, "negative chroma entry");
  }

  const Matrix& phi = tonnetz_transform();
  Matrix out(6, chroma.cols);
  for (std::size_t t = 0; t < chroma.cols; ++t) {
    double l1 = 0.0;
    for (std::size_t c = 0; c < 12; ++c) l1 += chroma.at(c, t);
    if (l1 == 0.0) continue;  // zero frame stays the zero vector
    for (std::size_t d = 0; d < 6; ++d) {
      double acc = 0.0;
      for (std::size_t c = 0; c < 12; ++c) acc += phi.at(d, c) * chroma.at(c, t);
      out.at(d, t) = acc / l1;
    }
  }
  return out;
}

}  // namespace coughdx
