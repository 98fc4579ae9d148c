#include "asuq/evaluators.hpp"

#include <bit>
#include <cmath>

#include "asuq/errors.hpp"
#include "asuq/io.hpp"
#include "asuq/linalg.hpp"
#include "asuq/rng.hpp"
#include "asuq/subprocess.hpp"

namespace asuq {

using json = nlohmann::ordered_json;

Link parse_link(std::string_view id) {
  if (id == "linear") return Link::Linear;
  if (id == "cubic" || id == "cubic-monotone") return Link::CubicMonotone;
  if (id == "logistic") return Link::Logistic;
  if (id == "quadratic") return Link::Quadratic;
  throw UsageError("unknown link function '" + std::string(id) + "' (expected linear, cubic, logistic, quadratic)");
}

std::string_view to_string(Link link) {
  switch (link) {
    case Link::Linear: return "linear";
    case Link::CubicMonotone: return "cubic";
    case Link::Logistic: return "logistic";
    case Link::Quadratic: return "quadratic";
  }
  return "linear";
}

double apply_link(Link link, double t) {
  switch (link) {
    case Link::Linear: return t;
    case Link::CubicMonotone: return t + t * t * t;
    case Link::Logistic: return 1.0 / (1.0 + std::exp(-4.0 * t));
    case Link::Quadratic: return 1.0 + t + 0.5 * t * t;
  }
  return t;
}

double link_derivative(Link link, double t) {
  switch (link) {
    case Link::Linear: return 1.0;
    case Link::CubicMonotone: return 1.0 + 3.0 * t * t;
    case Link::Logistic: {
      const double s = apply_link(Link::Logistic, t);
      return 4.0 * s * (1.0 - s);
    }
    case Link::Quadratic: return 1.0 + t;
  }
  return 1.0;
}

namespace {

double hash_noise(std::span<const double> x) {
  std::uint64_t h = 0x243f6a8885a308d3ULL;
  for (double v : x) h = mix64(h ^ std::bit_cast<std::uint64_t>(v));
  return 2.0 * (static_cast<double>(h >> 11) * 0x1.0p-53) - 1.0;
}

}  // namespace

Evaluator synthetic_ridge(std::vector<double> w_true, Link link, double noise) {
  if (w_true.empty()) throw DimensionError("ridge direction is empty");
  if (std::abs(norm2(w_true) - 1.0) > 1e-12) throw DomainError("ridge direction must have unit norm");
  if (!(noise >= 0.0)) throw DomainError("ridge noise amplitude must be >= 0");
  return [w = std::move(w_true), link, noise](const EvalPoint& pt) {
    if (pt.x.size() != w.size()) throw DimensionError("ridge evaluator: point dimension differs from direction");
    double f = apply_link(link, dot(w, pt.x));
    if (noise > 0.0) f += noise * hash_noise(pt.x);
    return f;
  };
}

Evaluator constant_evaluator(double value) {
  return [value](const EvalPoint&) { return value; };
}

std::vector<double> random_unit_vector(std::size_t m, std::uint64_t seed) {
  if (m == 0) throw DimensionError("unit vector of dimension 0");
  CounterRng rng(seed, Stream::Direction, 0);
  std::vector<double> v(m);
  double n = 0.0;
  do {
    // Box-Muller pairs give an isotropic direction.
    for (std::size_t i = 0; i < m; ++i) {
      const double u1 = 1.0 - rng.uniform01();
      const double u2 = rng.uniform01();
      v[i] = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
    }
    n = norm2(v);
  } while (n < 1e-12);
  for (auto& c : v) c /= n;
  return v;
}

ParamsEncoder raw_params_encoder(const ParameterSpace& space) {
  return [names = space.names()](const EvalPoint& pt) {
    json params = json::object();
    for (std::size_t i = 0; i < names.size(); ++i) params[names[i]] = pt.p[i];
    return params;
  };
}

std::string external_request(std::size_t index, const json& params, const json& condition) {
  json req;
  req["index"] = index;
  req["params"] = params;
  req["condition"] = condition.is_null() ? json::object() : condition;
  return req.dump() + "\n";
}

double parse_external_response(const std::string& stdout_text) {
  auto try_parse = [](std::string_view text) -> std::optional<double> {
    const json j = json::parse(text, nullptr, false);
    if (j.is_discarded() || !j.is_object() || !j.contains("qoi") || !j["qoi"].is_number()) return std::nullopt;
    return j["qoi"].get<double>();
  };
  if (auto v = try_parse(stdout_text)) return *v;
  // Solvers often log before the result; accept the last non-empty line.
  const auto lines = io::split(stdout_text, '\n');
  for (auto it = lines.rbegin(); it != lines.rend(); ++it) {
    const auto line = io::trim(*it);
    if (line.empty()) continue;
    if (auto v = try_parse(line)) return *v;
    break;
  }
  throw EvaluationError("evaluator output is not a JSON object with a numeric \"qoi\"");
}

Evaluator external_evaluator(ExternalCommand spec) {
  if (spec.command.empty()) throw UsageError("empty evaluator command");
  if (!spec.encode) throw UsageError("external evaluator needs a parameter encoder");
  return [spec = std::move(spec)](const EvalPoint& pt) {
    const auto request = external_request(pt.index, spec.encode(pt), spec.condition);
    const auto res = run_process(spec.command, request, spec.timeout);
    auto tail = [](const std::string& s) {
      const auto t = io::trim(s);
      return std::string(t.size() > 400 ? t.substr(t.size() - 400) : t);
    };
    if (res.timed_out) throw EvaluationError("evaluator timed out");
    if (res.term_signal) throw EvaluationError("evaluator killed by signal " + std::to_string(res.term_signal));
    if (res.exit_code != 0)
      throw EvaluationError("evaluator exited with status " + std::to_string(res.exit_code) +
                            (res.err.empty() ? "" : ": " + tail(res.err)));
    return parse_external_response(res.out);
  };
}

}  // namespace asuq
