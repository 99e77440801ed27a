#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace coughdx {

bool is_power_of_two(std::size_t n);

// In-place iterative radix-2 FFT; size must be a power of two.
void fft_pow2(std::vector<std::complex<double>>& a);

// Forward DFT of a real frame, one-sided output of n/2 + 1 complex bins.
// Uses the radix-2 FFT for power-of-two sizes and a direct DFT otherwise.
std::vector<std::complex<double>> real_dft_onesided(const double* x,
                                                    std::size_t n);

}  // namespace coughdx
