#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "asuq/campaign.hpp"
#include "asuq/linalg.hpp"

namespace asuq {

// Sample-size guidance for the linear fit in m inputs.
constexpr std::size_t minimum_samples(std::size_t m) { return m + 1; }
constexpr std::size_t floor_samples(std::size_t m) { return 2 * m; }
constexpr std::size_t recommended_samples(std::size_t m) { return m * m; }

inline constexpr std::size_t kDefaultBootstrapReplicates = 100;

struct LinearFit {
  std::vector<double> u_hat;  // intercept, then one slope per input
  double residual_norm = 0.0;
  double cond_estimate = 0.0;
};

/// One-dimensional active subspace: the normalized gradient of the global
/// least-squares linear model, signed so its largest-magnitude component is
/// positive (first such component on ties).
struct ActiveSubspace {
  std::vector<double> w;
  LinearFit fit;
  std::size_t sample_count = 0;

  std::size_t dimension() const noexcept { return w.size(); }
};

// Ordinary least squares of f on [1 | X]. Throws RankError for a rank-deficient design.
LinearFit fit_linear(const Samples& samples);

/// Throws RankError (too few rows or a rank-deficient design) or
/// DegenerateError when the response carries no linear trend.
ActiveSubspace fit_active_direction(const Samples& samples);

void apply_sign_convention(std::span<double> w);

struct BootstrapEnsemble {
  std::vector<std::vector<double>> replicates;  // unit vectors, aligned so w_k . w >= 0
  std::uint64_t seed = 0;
  std::size_t attempts = 0;  // resamples drawn, including rejected rank-deficient ones

  std::size_t size() const noexcept { return replicates.size(); }
  std::vector<double> component(std::size_t i) const;
};

/// Resamples the rows of (A, f) with replacement and refits, N times.
/// Replicate k's draws depend only on (seed, k, attempt). Rank-deficient
/// resamples are redrawn, with a total budget of 100 N draws.
BootstrapEnsemble bootstrap_direction(const Samples& samples, const ActiveSubspace& as, std::size_t replicates,
                                      std::uint64_t seed);

// Linearly interpolated sample quantile (Hyndman-Fan type 7). `values` must be non-empty.
double quantile(std::vector<double> values, double q);

struct RankedParameter {
  std::string name;
  std::size_t index = 0;
  double weight = 0.0;
  double magnitude = 0.0;
};

// Descending |w_i|, ties by index.
std::vector<RankedParameter> sensitivity_ranking(const ActiveSubspace& as, std::span<const std::string> names);

struct SummaryPoint {
  double y = 0.0;
  double f = 0.0;
};

struct SummaryData {
  std::vector<SummaryPoint> points;           // (w^T x_j, f_j), in sample order
  std::vector<SummaryPoint> bootstrap_cloud;  // (w_k^T x_j, f_j), replicate-major
  // Adjacent pairs, after sorting by y, that move against the overall trend.
  // Zero means the samples are monotone in the active variable.
  std::size_t discordant_pairs = 0;
};

SummaryData summary_data(const Samples& samples, const ActiveSubspace& as,
                         const BootstrapEnsemble* ensemble = nullptr);

using GradientFn = std::function<std::vector<double>(std::span<const double>)>;

struct CMatrixEstimate {
  Matrix c;
  std::vector<double> eigenvalues;  // descending
  Matrix eigenvectors;              // columns, each signed like w
  std::size_t samples = 0;

  std::vector<double> eigenvector(std::size_t k) const;
};

/// Monte Carlo estimate of E[grad f grad f^T] under the uniform density on
/// [-1, 1]^m, followed by its eigendecomposition. Validation aid for
/// differentiable test functions.
CMatrixEstimate estimate_c_gradient_oracle(const GradientFn& grad, std::size_t m, std::size_t samples,
                                           std::uint64_t seed);

}  // namespace asuq
