#include "asuq/active_subspace.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "asuq/errors.hpp"
#include "asuq/rng.hpp"

namespace asuq {
namespace {

Matrix design_matrix(const Samples& s) {
  Matrix a(s.size(), s.dimension() + 1);
  for (std::size_t j = 0; j < s.size(); ++j) {
    a(j, 0) = 1.0;
    for (std::size_t i = 0; i < s.dimension(); ++i) a(j, i + 1) = s.x(j, i);
  }
  return a;
}

void check_shape(const Samples& s) {
  if (s.x.rows() != s.f.size()) throw DimensionError("sample matrix rows differ from the number of responses");
  if (s.dimension() == 0) throw DimensionError("samples have no input coordinates");
}

}  // namespace

LinearFit fit_linear(const Samples& samples) {
  check_shape(samples);
  const std::size_t m = samples.dimension();
  if (samples.size() < minimum_samples(m))
    throw RankError("linear fit in " + std::to_string(m) + " inputs needs M >= " + std::to_string(minimum_samples(m)) +
                        " samples, got " + std::to_string(samples.size()),
                    samples.size());
  const auto ls = solve_least_squares(design_matrix(samples), samples.f);
  return LinearFit{ls.solution, ls.residual_norm, ls.condition};
}

void apply_sign_convention(std::span<double> w) {
  std::size_t lead = 0;
  for (std::size_t i = 1; i < w.size(); ++i)
    if (std::abs(w[i]) > std::abs(w[lead])) lead = i;
  if (!w.empty() && w[lead] < 0.0)
    for (auto& v : w) v = -v;
}

ActiveSubspace fit_active_direction(const Samples& samples) {
  ActiveSubspace as;
  as.fit = fit_linear(samples);
  as.sample_count = samples.size();

  std::vector<double> grad(as.fit.u_hat.begin() + 1, as.fit.u_hat.end());
  const auto [lo, hi] = std::minmax_element(samples.f.begin(), samples.f.end());
  double scale = 0.0;
  for (double f : samples.f) scale = std::max(scale, std::abs(f));
  const double gnorm = norm2(grad);
  if (*hi - *lo <= 1e-14 * scale || gnorm < 1e-14 * scale)
    throw DegenerateError("constant response: the linear fit has no gradient to normalize");

  for (auto& g : grad) g /= gnorm;
  apply_sign_convention(grad);
  as.w = std::move(grad);
  return as;
}

std::vector<double> BootstrapEnsemble::component(std::size_t i) const {
  std::vector<double> out;
  out.reserve(replicates.size());
  for (const auto& w : replicates) out.push_back(w.at(i));
  return out;
}

BootstrapEnsemble bootstrap_direction(const Samples& samples, const ActiveSubspace& as, std::size_t replicates,
                                      std::uint64_t seed) {
  check_shape(samples);
  if (replicates == 0) throw UsageError("bootstrap needs at least one replicate");
  if (as.dimension() != samples.dimension()) throw DimensionError("bootstrap: direction and samples differ in dimension");
  const std::size_t big_m = samples.size();
  const std::size_t m = samples.dimension();
  if (big_m < minimum_samples(m))
    throw RankError("bootstrap needs M >= m + 1 samples", big_m);

  BootstrapEnsemble ens;
  ens.seed = seed;
  ens.replicates.reserve(replicates);
  const std::size_t budget = 100 * replicates;

  Samples resample;
  resample.x = Matrix(big_m, m);
  resample.f.resize(big_m);
  for (std::size_t k = 0; k < replicates; ++k) {
    for (std::uint64_t attempt = 0;; ++attempt) {
      if (ens.attempts >= budget)
        throw DegenerateError("bootstrap: exhausted " + std::to_string(budget) +
                              " resampling attempts on rank-deficient draws");
      ++ens.attempts;
      CounterRng rng(seed, Stream::Bootstrap, k, attempt);
      for (std::size_t j = 0; j < big_m; ++j) {
        const auto src = static_cast<std::size_t>(rng.below(big_m));
        std::copy(samples.x.row(src).begin(), samples.x.row(src).end(), resample.x.row(j).begin());
        resample.f[j] = samples.f[src];
      }
      try {
        auto w = fit_active_direction(resample).w;
        if (dot(w, as.w) < 0.0)
          for (auto& v : w) v = -v;
        ens.replicates.push_back(std::move(w));
        break;
      } catch (const RankError&) {
      } catch (const DegenerateError&) {
      }
    }
  }
  return ens;
}

double quantile(std::vector<double> values, double q) {
  if (values.empty()) throw DimensionError("quantile of an empty set");
  std::sort(values.begin(), values.end());
  const double h = (static_cast<double>(values.size()) - 1.0) * std::clamp(q, 0.0, 1.0);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

std::vector<RankedParameter> sensitivity_ranking(const ActiveSubspace& as, std::span<const std::string> names) {
  if (names.size() != as.dimension()) throw DimensionError("sensitivity ranking: one name per component required");
  std::vector<RankedParameter> out;
  for (std::size_t i = 0; i < as.dimension(); ++i)
    out.push_back({names[i], i, as.w[i], std::abs(as.w[i])});
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.magnitude > b.magnitude; });
  return out;
}

SummaryData summary_data(const Samples& samples, const ActiveSubspace& as, const BootstrapEnsemble* ensemble) {
  check_shape(samples);
  if (as.dimension() != samples.dimension()) throw DimensionError("summary: direction and samples differ in dimension");
  SummaryData out;
  const std::size_t n = samples.size();
  out.points.reserve(n);
  for (std::size_t j = 0; j < n; ++j) out.points.push_back({dot(as.w, samples.x.row(j)), samples.f[j]});

  if (n >= 2) {
    double ybar = 0.0, fbar = 0.0;
    for (const auto& p : out.points) {
      ybar += p.y;
      fbar += p.f;
    }
    ybar /= static_cast<double>(n);
    fbar /= static_cast<double>(n);
    double cov = 0.0;
    for (const auto& p : out.points) cov += (p.y - ybar) * (p.f - fbar);
    const double trend = cov < 0.0 ? -1.0 : 1.0;

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return out.points[a].y < out.points[b].y; });
    for (std::size_t k = 0; k + 1 < n; ++k)
      if (trend * (out.points[order[k + 1]].f - out.points[order[k]].f) < 0.0) ++out.discordant_pairs;
  }

  if (ensemble) {
    out.bootstrap_cloud.reserve(ensemble->size() * n);
    for (const auto& wk : ensemble->replicates)
      for (std::size_t j = 0; j < n; ++j) out.bootstrap_cloud.push_back({dot(wk, samples.x.row(j)), samples.f[j]});
  }
  return out;
}

std::vector<double> CMatrixEstimate::eigenvector(std::size_t k) const {
  std::vector<double> v(eigenvectors.rows());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = eigenvectors(i, k);
  return v;
}

CMatrixEstimate estimate_c_gradient_oracle(const GradientFn& grad, std::size_t m, std::size_t samples,
                                           std::uint64_t seed) {
  if (!grad) throw UsageError("gradient oracle needs a gradient function");
  if (m == 0) throw DimensionError("gradient oracle: dimension 0");
  if (samples == 0) throw UsageError("gradient oracle needs at least one sample");
  CMatrixEstimate est;
  est.samples = samples;
  est.c = Matrix(m, m);
  std::vector<double> x(m);
  for (std::size_t s = 0; s < samples; ++s) {
    CounterRng rng(seed, Stream::GradientOracle, s);
    for (auto& v : x) v = rng.uniform(-1.0, 1.0);
    const auto g = grad(x);
    if (g.size() != m) throw DimensionError("gradient oracle: gradient has the wrong length");
    for (double v : g)
      if (!std::isfinite(v)) throw EvaluationError("gradient oracle: non-finite gradient component");
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = i; j < m; ++j) est.c(i, j) += g[i] * g[j];
  }
  const double inv = 1.0 / static_cast<double>(samples);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i; j < m; ++j) {
      est.c(i, j) *= inv;
      est.c(j, i) = est.c(i, j);
    }

  auto eig = symmetric_eigen(est.c);
  est.eigenvalues = std::move(eig.values);
  est.eigenvectors = std::move(eig.vectors);
  for (std::size_t k = 0; k < m; ++k) {
    auto v = est.eigenvector(k);
    apply_sign_convention(v);
    for (std::size_t i = 0; i < m; ++i) est.eigenvectors(i, k) = v[i];
  }
  return est;
}

}  // namespace asuq
