#include "asuq/surrogate.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "asuq/errors.hpp"
#include "asuq/student_t.hpp"

namespace asuq {

QuadraticSurrogate fit_quadratic(std::span<const SummaryPoint> points, double y_lo, double y_hi) {
  const std::size_t n = points.size();
  std::set<double> distinct;
  for (const auto& p : points) distinct.insert(p.y);
  if (n < 3 || distinct.size() < 3)
    throw RankError("quadratic fit needs at least 3 distinct active-variable values", distinct.size());

  Matrix t(n, 3);
  std::vector<double> f(n);
  for (std::size_t j = 0; j < n; ++j) {
    t(j, 0) = 1.0;
    t(j, 1) = points[j].y;
    t(j, 2) = points[j].y * points[j].y;
    f[j] = points[j].f;
  }
  const auto ls = solve_least_squares(t, f);

  QuadraticSurrogate s;
  std::copy(ls.solution.begin(), ls.solution.end(), s.coeffs.begin());
  s.gram_inverse = gram_inverse_from_r(ls.r);
  s.sample_count = n;
  s.y_lo = y_lo;
  s.y_hi = y_hi;

  double rss = 0.0;
  for (double r : ls.residual) rss += r * r;
  if (n > 3) s.sigma2_hat = rss / static_cast<double>(n - 3);

  double mean = 0.0, scale = 0.0;
  for (double v : f) {
    mean += v;
    scale = std::max(scale, std::abs(v));
  }
  mean /= static_cast<double>(n);
  double tss = 0.0;
  for (double v : f) tss += (v - mean) * (v - mean);
  const double floor = 1e-14 * scale;
  if (tss <= floor * floor * static_cast<double>(n)) {
    s.degenerate_tss = true;
    s.r_squared = 1.0;
  } else {
    s.r_squared = 1.0 - rss / tss;
  }
  return s;
}

QuadraticSurrogate fit_quadratic(const SummaryData& summary, const ActiveSubspace& as) {
  const double reach = norm1(as.w);
  return fit_quadratic(summary.points, -reach, reach);
}

double predict(const QuadraticSurrogate& s, double y) { return s.coeffs[0] + y * (s.coeffs[1] + y * s.coeffs[2]); }

double leverage(const QuadraticSurrogate& s, double y) {
  const double t[3] = {1.0, y, y * y};
  double q = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) q += t[i] * s.gram_inverse(i, j) * t[j];
  return q;
}

double band_halfwidth(const QuadraticSurrogate& s, double y, double level) {
  if (!(level > 0.5 && level < 1.0)) throw DomainError("confidence level must lie in (0.5, 1)");
  if (!s.sigma2_hat)
    throw DegenerateError("confidence bounds unavailable: residual variance undefined with M = 3 samples");
  const double tq = student_t_quantile(level, static_cast<double>(s.sample_count - 3));
  return tq * std::sqrt(*s.sigma2_hat * std::max(0.0, leverage(s, y)));
}

double upper_confidence(const QuadraticSurrogate& s, double y, double level) {
  return predict(s, y) + band_halfwidth(s, y, level);
}

}  // namespace asuq
