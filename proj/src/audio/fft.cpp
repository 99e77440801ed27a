#include "coughdx/audio/fft.hpp"

#include <cmath>

namespace coughdx {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

void fft_pow2(std::vector<std::complex<double>>& a) {
  const std::size_t n = a.size();
  if (n <= 1) return;
  // Bit-reversal permutation.
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double ang = -2.0 * kPi / static_cast<double>(len);
    const std::complex<double> wlen(std::cos(ang), std::sin(ang));
    for (std::size_t i = 0; i < n; i += len) {
      std::complex<double> w(1.0, 0.0);
      for (std::size_t k = 0; k < len / 2; ++k) {
        const std::complex<double> u = a[i + k];
        const std::complex<double> v = a[i + k + len / 2] * w;
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
        w *= wlen;
      }
    }
  }
}

std::vector<std::complex<double>> real_dft_onesided(const double* x,
                                                    std::size_t n) {
  const std::size_t n_bins = n / 2 + 1;
  std::vector<std::complex<double>> out(n_bins);
  if (is_power_of_two(n)) {
    std::vector<std::complex<double>> a(n);
    for (std::size_t i = 0; i < n; ++i) a[i] = {x[i], 0.0};
    fft_pow2(a);
    for (std::size_t k = 0; k < n_bins; ++k) out[k] = a[k];
    return out;
  }
  for (std::size_t k = 0; k < n_bins; ++k) {
    double re = 0.0, im = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double ang = -2.0 * kPi * static_cast<double>(k) *
                         static_cast<double>(i) / static_cast<double>(n);
      re += x[i] * std::cos(ang);
      im += x[i] * std::sin(ang);
    }
    out[k] = {re, im};
  }
  return out;
}

}  // namespace coughdx
