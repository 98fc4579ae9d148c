#include "asuq/param_space.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "asuq/errors.hpp"
#include "asuq/rng.hpp"

#ifndef ASUQ_DATA_DIR
#define ASUQ_DATA_DIR "data"
#endif

namespace asuq {

ParameterSpace::ParameterSpace(std::vector<ParameterSpec> params) : params_(std::move(params)) {
  if (params_.empty()) throw SchemaError("parameter space must contain at least one parameter");
  std::set<std::string> seen;
  for (const auto& p : params_) {
    if (p.name.empty()) throw SchemaError("parameter with empty name");
    if (!seen.insert(p.name).second) throw SchemaError("duplicate parameter name '" + p.name + "'");
    if (!std::isfinite(p.min) || !std::isfinite(p.max) || !std::isfinite(p.nominal))
      throw SchemaError("parameter '" + p.name + "' has a non-finite bound");
    if (!(p.min < p.max)) throw SchemaError("parameter '" + p.name + "' requires min < max");
    if (p.nominal < p.min || p.nominal > p.max)
      throw SchemaError("parameter '" + p.name + "' nominal lies outside [min, max]");
  }
}

std::optional<std::size_t> ParameterSpace::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < params_.size(); ++i)
    if (params_[i].name == name) return i;
  return std::nullopt;
}

std::vector<std::string> ParameterSpace::names() const {
  std::vector<std::string> out;
  out.reserve(params_.size());
  for (const auto& p : params_) out.push_back(p.name);
  return out;
}

bool operator==(const ParameterSpace& a, const ParameterSpace& b) {
  if (a.params_.size() != b.params_.size()) return false;
  for (std::size_t i = 0; i < a.params_.size(); ++i) {
    const auto& p = a.params_[i];
    const auto& q = b.params_[i];
    if (p.name != q.name || p.min != q.min || p.nominal != q.nominal || p.max != q.max || p.units != q.units)
      return false;
  }
  return true;
}

bool NormalizedPoint::all_in_bounds() const {
  for (bool b : in_bounds)
    if (!b) return false;
  return true;
}

NormalizedPoint normalize(std::span<const double> physical, const ParameterSpace& space) {
  if (physical.size() != space.dimension())
    throw DimensionError("normalize: expected " + std::to_string(space.dimension()) + " values, got " +
                         std::to_string(physical.size()));
  NormalizedPoint out;
  out.x.resize(physical.size());
  out.in_bounds.resize(physical.size());
  for (std::size_t i = 0; i < physical.size(); ++i) {
    const auto& p = space[i];
    out.x[i] = 2.0 * (physical[i] - p.min) / (p.max - p.min) - 1.0;
    out.in_bounds[i] = physical[i] >= p.min && physical[i] <= p.max;
  }
  return out;
}

std::vector<double> denormalize(std::span<const double> normalized, const ParameterSpace& space) {
  if (normalized.size() != space.dimension())
    throw DimensionError("denormalize: expected " + std::to_string(space.dimension()) + " values, got " +
                         std::to_string(normalized.size()));
  std::vector<double> out(normalized.size());
  for (std::size_t i = 0; i < normalized.size(); ++i) {
    const auto& p = space[i];
    // Endpoints map exactly onto the bounds.
    const double t = 0.5 * (normalized[i] + 1.0);
    out[i] = (1.0 - t) * p.min + t * p.max;
  }
  return out;
}

std::vector<double> sample_point(std::size_t dimension, std::uint64_t seed, std::size_t index) {
  CounterRng rng(seed, Stream::Sample, index);
  std::vector<double> x(dimension);
  for (auto& v : x) v = rng.uniform(-1.0, 1.0);
  return x;
}

Matrix sample_uniform(const ParameterSpace& space, std::size_t count, std::uint64_t seed) {
  const std::size_t m = space.dimension();
  Matrix x(count, m);
  for (std::size_t j = 0; j < count; ++j) {
    const auto row = sample_point(m, seed, j);
    std::copy(row.begin(), row.end(), x.row(j).begin());
  }
  return x;
}

nlohmann::ordered_json space_to_json(const ParameterSpace& space) {
  auto arr = nlohmann::ordered_json::array();
  for (const auto& p : space.params()) {
    arr.push_back({{"name", p.name}, {"min", p.min}, {"nominal", p.nominal}, {"max", p.max}, {"units", p.units}});
  }
  return arr;
}

ParameterSpace space_from_json(const nlohmann::ordered_json& j) {
  if (!j.is_array()) throw SchemaError("parameter space must be a JSON array");
  std::vector<ParameterSpec> params;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const auto& e = j[i];
    const std::string where = "parameter space entry " + std::to_string(i);
    if (!e.is_object()) throw SchemaError(where + " is not an object");
    for (const char* key : {"name", "min", "nominal", "max"})
      if (!e.contains(key)) throw SchemaError(where + " lacks \"" + key + "\"");
    if (!e["name"].is_string()) throw SchemaError(where + ": name must be a string");
    for (const char* key : {"min", "nominal", "max"})
      if (!e[key].is_number()) throw SchemaError(where + ": " + key + " must be a number");
    ParameterSpec p;
    p.name = e["name"].get<std::string>();
    p.min = e["min"].get<double>();
    p.nominal = e["nominal"].get<double>();
    p.max = e["max"].get<double>();
    if (e.contains("units")) {
      if (!e["units"].is_string()) throw SchemaError(where + ": units must be a string");
      p.units = e["units"].get<std::string>();
    }
    params.push_back(std::move(p));
  }
  return ParameterSpace(std::move(params));
}

ParameterSpace load_space(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open parameter space file " + path.string());
  nlohmann::ordered_json j;
  try {
    j = nlohmann::ordered_json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
  return space_from_json(j);
}

std::filesystem::path data_dir() {
  if (const char* env = std::getenv("ASUQ_DATA_DIR"); env && *env) return env;
  return ASUQ_DATA_DIR;
}

ParameterSpace default_space() { return load_space(data_dir() / "hyshot_space.json"); }

}  // namespace asuq
