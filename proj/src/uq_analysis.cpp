#include "asuq/uq_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "asuq/errors.hpp"
#include "asuq/rng.hpp"
#include "asuq/student_t.hpp"

namespace asuq {

Corners corner_extrema(std::span<const double> w) {
  Corners c;
  c.x_max.resize(w.size());
  c.x_min.resize(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) {
    c.x_max[i] = w[i] < 0.0 ? -1.0 : 1.0;
    c.x_min[i] = -c.x_max[i];
  }
  return c;
}

RangeEstimate estimate_range(std::span<const double> w, const Evaluator& evaluator, std::span<const double> samples,
                             const ParameterSpace& space, std::size_t first_index, std::size_t discordant_pairs) {
  if (w.size() != space.dimension()) throw DimensionError("range: direction and space differ in dimension");
  RangeEstimate est;
  est.corners = corner_extrema(w);
  est.nonmonotone_caveat = discordant_pairs > 0;

  auto eval_corner = [&](const std::vector<double>& x, std::size_t index, const char* label) -> std::optional<double> {
    const auto p = denormalize(x, space);
    try {
      const double f = evaluator(EvalPoint{index, x, p});
      if (!std::isfinite(f)) throw EvaluationError("non-finite value");
      return f;
    } catch (const std::exception& e) {
      est.errors.push_back(std::string(label) + ": " + e.what());
      return std::nullopt;
    }
  };
  est.f_min = eval_corner(est.corners.x_min, first_index, "x_min corner");
  est.f_max = eval_corner(est.corners.x_max, first_index + 1, "x_max corner");
  if (!est.errors.empty()) {
    std::string msg = "corner evaluation failed";
    for (const auto& e : est.errors) msg += "; " + e;
    throw RangeEvaluationError(msg, est);
  }
  // w carries a sign convention, not the trend, so f may decrease along it.
  if (*est.f_min > *est.f_max) {
    std::swap(est.f_min, est.f_max);
    est.flipped = true;
  }
  est.validated = std::all_of(samples.begin(), samples.end(),
                              [&](double f) { return f >= *est.f_min && f <= *est.f_max; });
  return est;
}

std::string_view to_string(Feasibility f) {
  switch (f) {
    case Feasibility::Empty: return "empty";
    case Feasibility::Partial: return "partial";
    case Feasibility::Full: return "full";
  }
  return "empty";
}

InscribedBox inscribed_box(std::span<const double> w, double y_max, std::span<const double> x_min) {
  if (w.size() != x_min.size()) throw DimensionError("inscribed box: w and x_min differ in length");
  const std::size_t m = w.size();
  InscribedBox box;
  box.sides.assign(m, 2.0);
  const double budget = y_max - dot(w, x_min);
  if (budget < 0.0) {
    box.sides.assign(m, 0.0);
    box.empty = true;
    return box;
  }

  std::vector<std::size_t> active;
  double full_cost = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    if (w[i] != 0.0) active.push_back(i);
    full_cost += 2.0 * std::abs(w[i]);
  }
  if (active.empty() || full_cost <= budget) {
    box.lambda = active.empty() ? 0.0 : 2.0 * std::abs(w[active.back()]);
    return box;
  }

  // Cheapest coordinates saturate at s = 2 first; the rest share a common |w_i| s_i = lambda.
  std::stable_sort(active.begin(), active.end(), [&](std::size_t a, std::size_t b) { return std::abs(w[a]) < std::abs(w[b]); });
  double capped_cost = 0.0;
  double lambda = 0.0;
  for (std::size_t k = 0; k < active.size(); ++k) {
    lambda = (budget - capped_cost) / static_cast<double>(active.size() - k);
    if (2.0 * std::abs(w[active[k]]) >= lambda) break;
    capped_cost += 2.0 * std::abs(w[active[k]]);
  }
  box.lambda = lambda;
  for (auto i : active) box.sides[i] = std::min(2.0, lambda / std::abs(w[i]));
  return box;
}

SafeSetResult invert_safe_set(const QuadraticSurrogate& s, std::span<const double> w, double threshold,
                              const ParameterSpace& space, double level) {
  if (w.size() != space.dimension()) throw DimensionError("safe set: direction and space differ in dimension");
  if (std::abs(norm2(w) - 1.0) > 1e-9) throw DomainError("safe set: w must have unit norm");
  if (!s.bounds_available())
    throw DegenerateError("safe set: confidence bound unavailable (surrogate fitted to M = 3 samples)");

  SafeSetResult out;
  out.threshold = threshold;
  out.level = level;
  const double reach = norm1(w);
  const double y_lo = -reach;
  const double y_hi = reach;
  // Work along whichever of +w, -w makes the fitted mean increase.
  out.orientation = predict(s, y_hi) >= predict(s, y_lo) ? 1.0 : -1.0;
  const double sgn = out.orientation;
  std::vector<double> v(w.begin(), w.end());
  for (auto& c : v) c *= sgn;
  auto ub = [&](double y) { return upper_confidence(s, sgn * y, level); };

  if (ub(y_lo) > threshold) {
    out.feasible = Feasibility::Empty;
    out.y_max = y_lo;
  } else {
    out.feasible = Feasibility::Full;
    out.y_max = y_hi;
    const std::size_t n = kSafeSetScanPoints;
    double prev = y_lo;
    for (std::size_t k = 1; k < n; ++k) {
      const double y = k + 1 == n ? y_hi : y_lo + (y_hi - y_lo) * static_cast<double>(k) / static_cast<double>(n - 1);
      if (ub(y) > threshold) {
        double lo = prev, hi = y;
        for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(lo)); ++it) {
          const double mid = 0.5 * (lo + hi);
          if (ub(mid) <= threshold)
            lo = mid;
          else
            hi = mid;
        }
        out.feasible = Feasibility::Partial;
        out.y_max = lo;
        break;
      }
      prev = y;
    }
  }

  const auto corners = corner_extrema(v);
  if (out.feasible == Feasibility::Empty) {
    out.box.sides.assign(w.size(), 0.0);
    out.box.empty = true;
  } else if (out.feasible == Feasibility::Full) {
    out.box.sides.assign(w.size(), 2.0);
  } else {
    out.box = inscribed_box(v, out.y_max, corners.x_min);
  }

  const std::size_t m = w.size();
  out.box_lo.resize(m);
  out.box_hi.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    const double side = out.box.sides[i];
    if (corners.x_min[i] < 0.0) {
      out.box_lo[i] = -1.0;
      out.box_hi[i] = -1.0 + side;
    } else {
      out.box_lo[i] = 1.0 - side;
      out.box_hi[i] = 1.0;
    }
    const auto& p = space[i];
    auto phys = [&](double x) {
      const double t = 0.5 * (x + 1.0);
      return (1.0 - t) * p.min + t * p.max;
    };
    out.safe_ranges.push_back({p.name, p.units, phys(out.box_lo[i]), phys(out.box_hi[i]), side < 2.0 - 1e-12});
  }
  return out;
}

double silverman_bandwidth(std::span<const double> values) {
  const auto n = static_cast<double>(values.size());
  if (values.size() < 2) return 0.0;
  const double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  const double sigma = std::sqrt(ss / (n - 1.0));
  return 1.06 * sigma * std::pow(n, -0.2);
}

double CdfEstimate::at(double q) const {
  if (values.empty()) return 0.0;
  if (degenerate || bandwidth <= 0.0) {
    const double c = values.front();
    if (q < c) return 0.0;
    if (q > c) return 1.0;
    return 0.5;
  }
  double sum = 0.0;
  for (double v : values) sum += normal_cdf((q - v) / bandwidth);
  return sum / static_cast<double>(values.size());
}

CdfEstimate estimate_cdf(const QuadraticSurrogate& s, std::span<const double> w, std::uint64_t seed,
                         const CdfOptions& options) {
  if (options.samples < 2) throw UsageError("CDF estimation needs at least 2 samples");
  if (options.grid_size < 2) throw UsageError("CDF grid needs at least 2 points");
  const std::size_t m = w.size();
  CdfEstimate est;
  est.values.resize(options.samples);
  std::vector<double> x(m);
  for (std::size_t i = 0; i < options.samples; ++i) {
    CounterRng rng(seed, Stream::Cdf, i);
    for (auto& v : x) v = rng.uniform(-1.0, 1.0);
    est.values[i] = predict(s, dot(w, x));
  }
  std::sort(est.values.begin(), est.values.end());
  const double vmin = est.values.front();
  const double vmax = est.values.back();
  const double scale = std::max(std::abs(vmin), std::abs(vmax));

  est.grid.resize(options.grid_size);
  if (vmax - vmin <= 1e-14 * scale) {
    est.degenerate = true;
    est.bandwidth = 0.0;
    const double half = 1e-6 * std::max(1.0, scale);
    for (std::size_t k = 0; k < options.grid_size; ++k)
      est.grid[k] = vmin - half + 2.0 * half * static_cast<double>(k) / static_cast<double>(options.grid_size - 1);
  } else {
    est.bandwidth = options.bandwidth ? *options.bandwidth : silverman_bandwidth(est.values);
    if (!(est.bandwidth > 0.0)) throw DomainError("CDF bandwidth must be positive");
    const double lo = vmin - options.grid_margin * est.bandwidth;
    const double hi = vmax + options.grid_margin * est.bandwidth;
    for (std::size_t k = 0; k < options.grid_size; ++k)
      est.grid[k] = lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(options.grid_size - 1);
  }
  est.cdf.resize(options.grid_size);
  for (std::size_t k = 0; k < options.grid_size; ++k) est.cdf[k] = est.at(est.grid[k]);
  return est;
}

}  // namespace asuq
