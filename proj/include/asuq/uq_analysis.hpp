#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "asuq/active_subspace.hpp"
#include "asuq/campaign.hpp"
#include "asuq/errors.hpp"
#include "asuq/param_space.hpp"
#include "asuq/surrogate.hpp"

namespace asuq {

struct Corners {
  std::vector<double> x_min;
  std::vector<double> x_max;
};

// Hypercube corners extremizing w^T x; zero components go to +1 in x_max.
Corners corner_extrema(std::span<const double> w);

struct RangeEstimate {
  Corners corners;
  std::optional<double> f_min;
  std::optional<double> f_max;
  bool validated = false;         // every sample lies in [f_min, f_max]
  bool flipped = false;           // f decreased along w: f_min came from x_max and f_max from x_min
  bool nonmonotone_caveat = false;  // summary plot shows discordant pairs
  std::vector<std::string> errors;
};

/// Raised when a corner evaluation fails; carries whatever was computed.
struct RangeEvaluationError : EvaluationError {
  RangeEvaluationError(const std::string& what, RangeEstimate partial)
      : EvaluationError(what), partial(std::move(partial)) {}
  RangeEstimate partial;
};

/// Evaluates the black box at the two corners and reports the smaller and
/// larger value as f_min and f_max, whichever way w happens to point. `space` supplies the
/// physical coordinates passed to the evaluator; corner indices are
/// first_index (x_min) and first_index + 1 (x_max).
RangeEstimate estimate_range(std::span<const double> w, const Evaluator& evaluator, std::span<const double> samples,
                             const ParameterSpace& space, std::size_t first_index = 0,
                             std::size_t discordant_pairs = 0);

enum class Feasibility { Empty, Partial, Full };
std::string_view to_string(Feasibility f);

struct InscribedBox {
  std::vector<double> sides;  // each in [0, 2]
  bool empty = false;
  double lambda = 0.0;  // common |w_i| s_i of the uncapped sides
};

/// Largest-volume axis-aligned box inside {x in [-1,1]^m : w^T x <= y_max}
/// with one corner pinned at x_min. Maximizes sum log s_i subject to
/// sum |w_i| s_i <= y_max - w^T x_min and 0 <= s_i <= 2 by water-filling.
InscribedBox inscribed_box(std::span<const double> w, double y_max, std::span<const double> x_min);

struct SafeRange {
  std::string name;
  std::string units;
  double lo = 0.0;
  double hi = 0.0;
  bool restricted = false;  // narrower than the original range
};

struct SafeSetResult {
  double threshold = 0.0;
  double level = 0.99;
  Feasibility feasible = Feasibility::Empty;
  double orientation = 1.0;  // S = {x : orientation * w^T x <= y_max}
  double y_max = 0.0;
  InscribedBox box;
  std::vector<double> box_lo;  // normalized box, anchored at x_min
  std::vector<double> box_hi;
  std::vector<SafeRange> safe_ranges;
};

inline constexpr std::size_t kSafeSetScanPoints = 2048;

/// Orients v = +-w so the fitted mean increases along v, finds the right end
/// y_max of the interval starting at -|w|_1 on which the upper confidence
/// bound at v^T x stays at or below the threshold, then inscribes the box in
/// the half-space v^T x <= y_max.
SafeSetResult invert_safe_set(const QuadraticSurrogate& s, std::span<const double> w, double threshold,
                              const ParameterSpace& space, double level = 0.99);

struct CdfOptions {
  std::size_t samples = 5000;
  std::size_t grid_size = 512;
  double grid_margin = 4.0;            // bandwidths beyond the extreme samples
  std::optional<double> bandwidth;     // Silverman's rule when absent
};

struct CdfEstimate {
  std::vector<double> grid;
  std::vector<double> cdf;
  std::vector<double> values;  // surrogate outputs, sorted
  double bandwidth = 0.0;
  bool degenerate = false;  // zero spread: step function, bandwidth 0

  std::size_t sample_count() const noexcept { return values.size(); }
  // Exact kernel-smoothed CDF at q (step CDF with value 1/2 at the atom when degenerate).
  double at(double q) const;
};

/// Pushes uniform samples through y = w^T x and the surrogate, then smooths
/// the output sample with a Gaussian kernel. Deterministic given the seed.
CdfEstimate estimate_cdf(const QuadraticSurrogate& s, std::span<const double> w, std::uint64_t seed,
                         const CdfOptions& options = {});

// Silverman's rule of thumb, 1.06 sigma n^{-1/5}.
double silverman_bandwidth(std::span<const double> values);

}  // namespace asuq
