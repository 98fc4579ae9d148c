#pragma once

// Serialized artifacts written by the CLI. CSV is canonical; the SVG
// renderings are a convenience for eyeballing the summary plot and CDF.

#include <optional>
#include <span>
#include <string>

#include "asuq/active_subspace.hpp"
#include "asuq/param_space.hpp"
#include "asuq/surrogate.hpp"
#include "asuq/uq_analysis.hpp"
#include "json.hpp"

namespace asuq::reports {

inline constexpr double kReportQuantiles[] = {0.05, 0.25, 0.5, 0.75, 0.95};

nlohmann::ordered_json results_json(const ActiveSubspace& as, std::span<const RankedParameter> ranking,
                                    const BootstrapEnsemble* ensemble);

// y,f,source with source in {sample, bootstrap}.
std::string summary_csv(const SummaryData& data);

nlohmann::ordered_json surrogate_json(const QuadraticSurrogate& s);
nlohmann::ordered_json range_json(const RangeEstimate& r, const ParameterSpace& space);
nlohmann::ordered_json safeset_json(const SafeSetResult& r);

// q,cdf
std::string cdf_csv(const CdfEstimate& c);

// Fixed-width table for the terminal.
std::string ranking_table(std::span<const RankedParameter> ranking);

struct BandSpec {
  const QuadraticSurrogate* surrogate = nullptr;
  double level = 0.99;
  std::optional<double> threshold;
};

std::string summary_svg(const SummaryData& data, const BandSpec& band = {});
std::string cdf_svg(const CdfEstimate& c);

std::string dump(const nlohmann::ordered_json& j);  // 2-space indent, trailing newline

}  // namespace asuq::reports
