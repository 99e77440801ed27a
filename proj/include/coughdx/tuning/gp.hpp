#pragma once

#include <vector>

namespace coughdx {

struct GpConfig {
  double sigma_f = 1.0;
  double length = 0.2;
  double sigma_n = 1e-4;
};

struct GpPrediction {
  double mean = 0.0;
  double variance = 0.0;
};

// Gaussian-process regression with a squared-exponential kernel
// k(a,b) = sigma_f^2 * exp(-|a-b|^2 / (2 l^2)) + sigma_n^2 * delta and the
// mean of the observed scores as prior mean. A singular kernel matrix gets
// diagonal jitter (1e-8, up to 3 retries) before failing.
GpPrediction gp_posterior(const std::vector<std::vector<double>>& points,
                          const std::vector<double>& scores,
                          const std::vector<double>& candidate,
                          const GpConfig& cfg = {});

}  // namespace coughdx
