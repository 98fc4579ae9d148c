#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "asuq/linalg.hpp"
#include "asuq/param_space.hpp"
#include "json.hpp"

namespace asuq {

/// Completed (x_j, f_j) pairs handed to the analysis routines. Rows of `x`
/// are normalized points; `indices` maps each row back to its run.
struct Samples {
  Matrix x;
  std::vector<double> f;
  std::vector<std::size_t> indices;

  std::size_t size() const noexcept { return f.size(); }
  std::size_t dimension() const noexcept { return x.cols(); }
};

enum class RunStatus { Pending, Running, Done, Failed };

std::string_view to_string(RunStatus s);
RunStatus run_status_from_string(std::string_view s);

struct RunRecord {
  std::size_t index = 0;
  std::vector<double> x;
  std::vector<double> p;
  RunStatus status = RunStatus::Pending;
  std::optional<double> f;
  std::optional<double> wall_time;
  std::string error;  // diagnostic from the last failed attempt
};

struct Campaign {
  ParameterSpace space;
  std::uint64_t seed = 0;
  nlohmann::ordered_json condition = nlohmann::ordered_json::object();
  std::vector<RunRecord> runs;

  // Draws `count` pending runs from the uniform density.
  static Campaign create(ParameterSpace space, std::size_t count, std::uint64_t seed,
                         nlohmann::ordered_json condition = nlohmann::ordered_json::object());

  std::size_t dimension() const noexcept { return space.dimension(); }
  std::size_t count(RunStatus s) const;

  // Done runs only. Failed and pending runs never reach a fit.
  Samples done_samples() const;

  // Throws SchemaError when an invariant is broken.
  void validate() const;
};

struct EvalPoint {
  std::size_t index;
  std::span<const double> x;  // normalized
  std::span<const double> p;  // physical
};

/// Returns the quantity of interest at one point. Failure is signalled by
/// throwing; the dispatcher records the message against the run.
using Evaluator = std::function<double(const EvalPoint&)>;

struct DispatchOptions {
  std::size_t max_concurrency = 1;
  bool retry_failed = false;
  bool record_timing = false;
  // Called under the writer lock after every state change.
  std::function<void(const Campaign&)> on_update;
};

struct EvaluationSummary {
  std::size_t attempted = 0;
  std::size_t done = 0;
  std::size_t failed = 0;
};

/// Evaluates every pending run (and failed runs when retry_failed is set).
/// Done runs are never touched. Results do not depend on max_concurrency or
/// completion order. Throws EvaluationError when every attempted run failed;
/// the campaign still records the per-run diagnostics in that case.
EvaluationSummary evaluate_campaign(Campaign& campaign, const Evaluator& evaluator,
                                    const DispatchOptions& options = {});

nlohmann::ordered_json campaign_to_json(const Campaign& c);
Campaign campaign_from_json(const nlohmann::ordered_json& j);
std::string serialize_campaign(const Campaign& c);
void save_campaign(const Campaign& c, const std::filesystem::path& path);
// Runs left in the running state by an interrupted process come back as pending.
Campaign load_campaign(const std::filesystem::path& path);

/// Samples CSV: header x1,...,xm,f and one row per done run.
std::string samples_csv(const Samples& s);
std::string samples_csv(const Campaign& c);

/// Reads a samples CSV into a campaign of done runs. Without a space the
/// physical coordinates equal the normalized ones.
Campaign load_dataset(const std::filesystem::path& path, const std::optional<ParameterSpace>& space = std::nullopt);
Campaign parse_dataset(const std::string& text, const std::optional<ParameterSpace>& space = std::nullopt);

}  // namespace asuq
