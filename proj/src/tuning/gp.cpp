#include "coughdx/tuning/gp.hpp"

#include <cmath>

#include "coughdx/core/error.hpp"

namespace coughdx {

namespace {

double sq_dist(const std::vector<double>& a, const std::vector<double>& b) {
  double d2 = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    d2 += d * d;
  }
  return d2;
}

// In-place Cholesky; false when a pivot is not positive.
bool cholesky(std::vector<double>& k, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      double sum = k[i * n + j];
      for (std::size_t t = 0; t < j; ++t) sum -= k[i * n + t] * k[j * n + t];
      if (i == j) {
        if (sum <= 0.0) return false;
        k[i * n + j] = std::sqrt(sum);
      } else {
        k[i * n + j] = sum / k[j * n + j];
      }
    }
  }
  return true;
}

void solve_lower(const std::vector<double>& l, std::size_t n,
                 std::vector<double>& b) {
  for (std::size_t i = 0; i < n; ++i) {
    double sum = b[i];
    for (std::size_t j = 0; j < i; ++j) sum -= l[i * n + j] * b[j];
    b[i] = sum / l[i * n + i];
  }
}

void solve_upper_t(const std::vector<double>& l, std::size_t n,
                   std::vector<double>& b) {
  for (std::size_t ii = n; ii-- > 0;) {
    double sum = b[ii];
    for (std::size_t j = ii + 1; j < n; ++j) sum -= l[j * n + ii] * b[j];
    b[ii] = sum / l[ii * n + ii];
  }
}

}  // namespace

GpPrediction gp_posterior(const std::vector<std::vector<double>>& points,
                          const std::vector<double>& scores,
                          const std::vector<double>& candidate,
                          const GpConfig& cfg) {
  const std::size_t n = points.size();
  require(n >= 1, ErrorCode::argument, "need at least one observation");
  require(scores.size() == n, ErrorCode::argument, "point/score count mismatch");

  const double sf2 = cfg.sigma_f * cfg.sigma_f;
  const double inv_2l2 = 1.0 / (2.0 * cfg.length * cfg.length);

  std::vector<double> kernel(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      const double v = sf2 * std::exp(-sq_dist(points[i], points[j]) * inv_2l2);
      kernel[i * n + j] = v;
      kernel[j * n + i] = v;
    }
    kernel[i * n + i] += cfg.sigma_n * cfg.sigma_n;
  }

  std::vector<double> chol;
  bool ok = false;
  double jitter = 0.0;
  for (int attempt = 0; attempt < 4 && !ok; ++attempt) {
    chol = kernel;
    if (attempt > 0) {
      jitter = jitter == 0.0 ? 1e-8 : jitter * 10.0;
      for (std::size_t i = 0; i < n; ++i) chol[i * n + i] += jitter;
    }
    ok = cholesky(chol, n);
  }
  require(ok, ErrorCode::numeric, "kernel matrix not positive definite");

  double prior_mean = 0.0;
  for (double s : scores) prior_mean += s;
  prior_mean /= static_cast<double>(n);

  std::vector<double> alpha(n);
  for (std::size_t i = 0; i < n; ++i) alpha[i] = scores[i] - prior_mean;
  solve_lower(chol, n, alpha);
  solve_upper_t(chol, n, alpha);

  std::vector<double> kstar(n);
  for (std::size_t i = 0; i < n; ++i) {
    kstar[i] = sf2 * std::exp(-sq_dist(points[i], candidate) * inv_2l2);
  }

  GpPrediction pred;
  for (std::size_t i = 0; i < n; ++i) pred.mean += kstar[i] * alpha[i];
  pred.mean += prior_mean;

  std::vector<double> v = kstar;
  solve_lower(chol, n, v);
  double reduction = 0.0;
  for (std::size_t i = 0; i < n; ++i) reduction += v[i] * v[i];
  pred.variance = std::max(0.0, sf2 - reduction);
  return pred;
}

}  // namespace coughdx
