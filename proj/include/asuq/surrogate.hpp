#pragma once

#include <array>
#include <optional>
#include <span>

#include "asuq/active_subspace.hpp"
#include "asuq/linalg.hpp"

namespace asuq {

/// g(y) = c0 + c1 y + c2 y^2 fitted by least squares to (y_j, f_j).
///
/// The confidence band is the pointwise band for the mean response,
///   g(y) + t_{level, M-3} * sqrt(sigma2 * t(y)^T (T^T T)^{-1} t(y)),  t(y) = [1, y, y^2].
/// The responses come from a deterministic simulation, so the band is a
/// conservative margin rather than a probability statement.
struct QuadraticSurrogate {
  std::array<double, 3> coeffs{};
  std::optional<double> sigma2_hat;  // RSS / (M - 3); absent when M == 3
  Matrix gram_inverse;               // 3 x 3
  std::size_t sample_count = 0;
  double r_squared = 1.0;
  bool degenerate_tss = false;  // all f_j equal; r_squared reported as 1
  double y_lo = -1.0;           // active-variable domain [-|w|_1, |w|_1]
  double y_hi = 1.0;

  bool bounds_available() const noexcept { return sigma2_hat.has_value(); }
  bool in_domain(double y) const noexcept { return y >= y_lo && y <= y_hi; }
};

/// Throws RankError when fewer than 3 distinct abscissae are present (or M < 3).
QuadraticSurrogate fit_quadratic(std::span<const SummaryPoint> points, double y_lo = -1.0, double y_hi = 1.0);
// Fits on the summary points with the domain taken from w.
QuadraticSurrogate fit_quadratic(const SummaryData& summary, const ActiveSubspace& as);

double predict(const QuadraticSurrogate& s, double y);

// t(y)^T G^{-1} t(y)
double leverage(const QuadraticSurrogate& s, double y);

// Half-width of the band at y; zero when the residuals vanish.
double band_halfwidth(const QuadraticSurrogate& s, double y, double level);

/// predict(y) + band_halfwidth(y). Throws DegenerateError when sigma2_hat is
/// undefined and DomainError unless 0.5 < level < 1.
double upper_confidence(const QuadraticSurrogate& s, double y, double level);

}  // namespace asuq
