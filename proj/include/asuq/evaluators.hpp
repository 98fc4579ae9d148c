#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "asuq/campaign.hpp"
#include "json.hpp"

namespace asuq {

enum class Link { Linear, CubicMonotone, Logistic, Quadratic };

Link parse_link(std::string_view id);  // "linear", "cubic", "logistic", "quadratic"
std::string_view to_string(Link link);

// linear: t;  cubic: t + t^3;  logistic: 1/(1+e^{-4t});  quadratic: 1 + t + t^2/2.
double apply_link(Link link, double t);
double link_derivative(Link link, double t);

/// f(x) = g(w^T x) + noise * u(x), where u(x) in [-1, 1) is a hash of the
/// bit pattern of x (same x, same noise). Requires |w| = 1.
Evaluator synthetic_ridge(std::vector<double> w_true, Link link, double noise = 0.0);

Evaluator constant_evaluator(double value);

// Uniformly distributed unit vector in R^m, reproducible from the seed.
std::vector<double> random_unit_vector(std::size_t m, std::uint64_t seed);

/// Builds the "params" object sent to an external evaluator for one point.
using ParamsEncoder = std::function<nlohmann::ordered_json(const EvalPoint&)>;

// {name: physical value} in space order.
ParamsEncoder raw_params_encoder(const ParameterSpace& space);

struct ExternalCommand {
  std::string command;  // run through /bin/sh -c
  ParamsEncoder encode;
  nlohmann::ordered_json condition = nlohmann::ordered_json::object();
  std::optional<std::chrono::milliseconds> timeout;
};

/// Per-run subprocess protocol: {"index", "params", "condition"} on stdin,
/// {"qoi": <real>} on stdout, exit status 0. Anything else throws
/// EvaluationError carrying the exit status and captured stderr.
Evaluator external_evaluator(ExternalCommand spec);

// Exposed for tests: the request document and the response parser.
std::string external_request(std::size_t index, const nlohmann::ordered_json& params,
                             const nlohmann::ordered_json& condition);
double parse_external_response(const std::string& stdout_text);

}  // namespace asuq
