#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "asuq/linalg.hpp"
#include "json.hpp"

namespace asuq {

struct ParameterSpec {
  std::string name;
  double min = 0.0;
  double nominal = 0.0;
  double max = 0.0;
  std::string units;
};

/// Ordered list of uncertain parameters. Coordinate i of a normalized point
/// maps affinely from [-1, 1] onto [params[i].min, params[i].max]. The input
/// density is uniform on that hypercube.
class ParameterSpace {
 public:
  ParameterSpace() = default;
  // Throws SchemaError on empty lists, duplicate names, or min/nominal/max out of order.
  explicit ParameterSpace(std::vector<ParameterSpec> params);

  std::size_t dimension() const noexcept { return params_.size(); }
  const std::vector<ParameterSpec>& params() const noexcept { return params_; }
  const ParameterSpec& operator[](std::size_t i) const { return params_.at(i); }
  std::optional<std::size_t> index_of(std::string_view name) const;
  std::vector<std::string> names() const;

  friend bool operator==(const ParameterSpace& a, const ParameterSpace& b);

 private:
  std::vector<ParameterSpec> params_;
};

struct NormalizedPoint {
  std::vector<double> x;
  std::vector<bool> in_bounds;  // false where the physical value lies outside [min, max]

  bool all_in_bounds() const;
};

NormalizedPoint normalize(std::span<const double> physical, const ParameterSpace& space);
std::vector<double> denormalize(std::span<const double> normalized, const ParameterSpace& space);

/// M i.i.d. uniform points on [-1, 1]^m as an M x m matrix. Row j depends
/// only on (seed, j).
Matrix sample_uniform(const ParameterSpace& space, std::size_t count, std::uint64_t seed);
std::vector<double> sample_point(std::size_t dimension, std::uint64_t seed, std::size_t index);

nlohmann::ordered_json space_to_json(const ParameterSpace& space);
ParameterSpace space_from_json(const nlohmann::ordered_json& j);
ParameterSpace load_space(const std::filesystem::path& path);

// Directory holding the bundled definition files. $ASUQ_DATA_DIR overrides the build-time default.
std::filesystem::path data_dir();
// The seven-parameter scramjet inflow space shipped in data/hyshot_space.json.
ParameterSpace default_space();

}  // namespace asuq
