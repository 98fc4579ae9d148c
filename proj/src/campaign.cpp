#include "asuq/campaign.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "asuq/errors.hpp"
#include "asuq/io.hpp"

namespace asuq {

using json = nlohmann::ordered_json;

std::string_view to_string(RunStatus s) {
  switch (s) {
    case RunStatus::Pending: return "pending";
    case RunStatus::Running: return "running";
    case RunStatus::Done: return "done";
    case RunStatus::Failed: return "failed";
  }
  return "pending";
}

RunStatus run_status_from_string(std::string_view s) {
  if (s == "pending") return RunStatus::Pending;
  if (s == "running") return RunStatus::Running;
  if (s == "done") return RunStatus::Done;
  if (s == "failed") return RunStatus::Failed;
  throw SchemaError("unknown run status '" + std::string(s) + "'");
}

Campaign Campaign::create(ParameterSpace space, std::size_t count, std::uint64_t seed, json condition) {
  if (count == 0) throw UsageError("campaign needs at least one sample");
  Campaign c;
  c.space = std::move(space);
  c.seed = seed;
  c.condition = condition.is_null() ? json::object() : std::move(condition);
  const Matrix x = sample_uniform(c.space, count, seed);
  c.runs.resize(count);
  for (std::size_t j = 0; j < count; ++j) {
    auto& r = c.runs[j];
    r.index = j;
    r.x.assign(x.row(j).begin(), x.row(j).end());
    r.p = denormalize(r.x, c.space);
  }
  return c;
}

std::size_t Campaign::count(RunStatus s) const {
  std::size_t n = 0;
  for (const auto& r : runs) n += r.status == s;
  return n;
}

Samples Campaign::done_samples() const {
  Samples s;
  const std::size_t m = dimension();
  s.x = Matrix(count(RunStatus::Done), m);
  std::size_t row = 0;
  for (const auto& r : runs) {
    if (r.status != RunStatus::Done) continue;
    std::copy(r.x.begin(), r.x.end(), s.x.row(row).begin());
    s.f.push_back(*r.f);
    s.indices.push_back(r.index);
    ++row;
  }
  return s;
}

void Campaign::validate() const {
  const std::size_t m = dimension();
  for (std::size_t j = 0; j < runs.size(); ++j) {
    const auto& r = runs[j];
    const std::string where = "run " + std::to_string(j);
    if (r.index != j) throw SchemaError(where + ": indices must be contiguous from 0");
    if (r.x.size() != m || r.p.size() != m) throw SchemaError(where + ": coordinate count differs from the space");
    const bool has_f = r.f.has_value() && std::isfinite(*r.f);
    if ((r.status == RunStatus::Done) != has_f)
      throw SchemaError(where + ": a run is done exactly when it carries a finite result");
    const auto p = denormalize(r.x, space);
    for (std::size_t i = 0; i < m; ++i) {
      const double scale = std::max({std::abs(p[i]), std::abs(space[i].min), std::abs(space[i].max)});
      if (std::abs(p[i] - r.p[i]) > 1e-9 * scale)
        throw SchemaError(where + ": physical and normalized coordinates disagree for '" + space[i].name + "'");
    }
  }
}

EvaluationSummary evaluate_campaign(Campaign& campaign, const Evaluator& evaluator, const DispatchOptions& options) {
  if (!evaluator) throw UsageError("no evaluator configured");
  std::vector<std::size_t> todo;
  for (const auto& r : campaign.runs) {
    if (r.status == RunStatus::Pending || r.status == RunStatus::Running ||
        (options.retry_failed && r.status == RunStatus::Failed))
      todo.push_back(r.index);
  }
  EvaluationSummary summary;
  summary.attempted = todo.size();
  if (todo.empty()) return summary;

  std::mutex writer;
  std::exception_ptr writer_error;
  auto publish = [&] {
    if (!options.on_update) return;
    try {
      options.on_update(campaign);
    } catch (...) {
      if (!writer_error) writer_error = std::current_exception();
    }
  };

  {
    std::lock_guard lock(writer);
    for (auto i : todo) {
      auto& r = campaign.runs[i];
      r.status = RunStatus::Running;
      r.f.reset();
      r.wall_time.reset();
      r.error.clear();
    }
    publish();
  }

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    while (true) {
      const std::size_t k = next.fetch_add(1);
      if (k >= todo.size()) return;
      const std::size_t i = todo[k];
      std::vector<double> x, p;
      {
        std::lock_guard lock(writer);
        x = campaign.runs[i].x;
        p = campaign.runs[i].p;
      }
      const auto start = std::chrono::steady_clock::now();
      std::optional<double> value;
      std::string error;
      try {
        const double f = evaluator(EvalPoint{i, x, p});
        if (std::isfinite(f))
          value = f;
        else
          error = "evaluator returned a non-finite value";
      } catch (const std::exception& e) {
        error = e.what();
      } catch (...) {
        error = "evaluator threw a non-standard exception";
      }
      const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;

      std::lock_guard lock(writer);
      auto& r = campaign.runs[i];
      if (value) {
        r.status = RunStatus::Done;
        r.f = *value;
        ++summary.done;
      } else {
        r.status = RunStatus::Failed;
        r.error = error.empty() ? "evaluation failed" : error;
        ++summary.failed;
      }
      if (options.record_timing) r.wall_time = elapsed.count();
      publish();
    }
  };

  const std::size_t workers = std::max<std::size_t>(1, std::min(options.max_concurrency, todo.size()));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t t = 0; t < workers; ++t) pool.emplace_back(worker);
  }
  if (writer_error) std::rethrow_exception(writer_error);
  if (summary.done == 0)
    throw EvaluationError("all " + std::to_string(summary.attempted) + " evaluations failed; first error: " +
                          campaign.runs[todo.front()].error);
  return summary;
}

json campaign_to_json(const Campaign& c) {
  json runs = json::array();
  for (const auto& r : c.runs) {
    json jr;
    jr["index"] = r.index;
    jr["x"] = r.x;
    jr["p"] = r.p;
    jr["status"] = std::string(to_string(r.status));
    if (r.f) jr["f"] = *r.f;
    if (r.wall_time) jr["wall_time"] = *r.wall_time;
    if (!r.error.empty()) jr["error"] = r.error;
    runs.push_back(std::move(jr));
  }
  json j;
  j["format"] = "asuq-campaign";
  j["version"] = 1;
  j["space"] = space_to_json(c.space);
  j["seed"] = c.seed;
  j["condition"] = c.condition;
  j["runs"] = std::move(runs);
  return j;
}

Campaign campaign_from_json(const json& j) {
  if (!j.is_object()) throw SchemaError("campaign manifest must be a JSON object");
  for (const char* key : {"space", "seed", "runs"})
    if (!j.contains(key)) throw SchemaError(std::string("campaign manifest lacks \"") + key + "\"");
  Campaign c;
  c.space = space_from_json(j["space"]);
  if (!j["seed"].is_number_unsigned()) throw SchemaError("campaign seed must be a non-negative integer");
  c.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("condition")) {
    if (!j["condition"].is_object()) throw SchemaError("campaign condition must be an object");
    c.condition = j["condition"];
  }
  if (!j["runs"].is_array()) throw SchemaError("campaign runs must be an array");
  for (const auto& jr : j["runs"]) {
    RunRecord r;
    try {
      r.index = jr.at("index").get<std::size_t>();
      r.x = jr.at("x").get<std::vector<double>>();
      r.p = jr.at("p").get<std::vector<double>>();
      r.status = run_status_from_string(jr.at("status").get<std::string>());
      if (jr.contains("f") && !jr["f"].is_null()) r.f = jr["f"].get<double>();
      if (jr.contains("wall_time")) r.wall_time = jr["wall_time"].get<double>();
      if (jr.contains("error")) r.error = jr["error"].get<std::string>();
    } catch (const nlohmann::json::exception& e) {
      throw SchemaError("malformed run record: " + std::string(e.what()));
    }
    c.runs.push_back(std::move(r));
  }
  c.validate();
  return c;
}

std::string serialize_campaign(const Campaign& c) { return campaign_to_json(c).dump(2) + "\n"; }

void save_campaign(const Campaign& c, const std::filesystem::path& path) {
  io::write_file_atomic(path, serialize_campaign(c));
}

Campaign load_campaign(const std::filesystem::path& path) {
  const std::string text = io::read_file(path);
  json j;
  try {
    j = json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
  Campaign c = campaign_from_json(j);
  for (auto& r : c.runs)
    if (r.status == RunStatus::Running) r.status = RunStatus::Pending;
  return c;
}

std::string samples_csv(const Samples& s) {
  std::string out;
  for (std::size_t i = 0; i < s.dimension(); ++i) out += "x" + std::to_string(i + 1) + ",";
  out += "f\n";
  for (std::size_t j = 0; j < s.size(); ++j) {
    for (double v : s.x.row(j)) out += io::format_double(v) + ",";
    out += io::format_double(s.f[j]) + "\n";
  }
  return out;
}

std::string samples_csv(const Campaign& c) { return samples_csv(c.done_samples()); }

Campaign parse_dataset(const std::string& text, const std::optional<ParameterSpace>& space) {
  std::vector<std::string_view> lines;
  for (auto line : io::split(text, '\n')) lines.push_back(line);

  std::size_t header_line = 0;
  while (header_line < lines.size() && io::trim(lines[header_line]).empty()) ++header_line;
  if (header_line == lines.size()) throw ParseError("samples file is empty");

  const auto header = io::split(io::trim(lines[header_line]), ',');
  if (header.size() < 2) throw ParseError("samples header needs at least one x column and f", header_line + 1);
  const std::size_t m = header.size() - 1;
  for (std::size_t i = 0; i < m; ++i)
    if (io::trim(header[i]) != "x" + std::to_string(i + 1))
      throw ParseError("samples header column " + std::to_string(i + 1) + " must be x" + std::to_string(i + 1),
                       header_line + 1);
  if (io::trim(header[m]) != "f") throw ParseError("samples header must end with f", header_line + 1);

  Campaign c;
  if (space) {
    if (space->dimension() != m)
      throw DimensionError("samples file has " + std::to_string(m) + " inputs but the space has " +
                           std::to_string(space->dimension()));
    c.space = *space;
  } else {
    std::vector<ParameterSpec> params;
    for (std::size_t i = 0; i < m; ++i) params.push_back({"x" + std::to_string(i + 1), -1.0, 0.0, 1.0, ""});
    c.space = ParameterSpace(std::move(params));
  }

  for (std::size_t ln = header_line + 1; ln < lines.size(); ++ln) {
    const auto line = io::trim(lines[ln]);
    if (line.empty()) continue;
    const auto fields = io::split(line, ',');
    if (fields.size() != m + 1)
      throw ParseError("expected " + std::to_string(m + 1) + " columns, found " + std::to_string(fields.size()), ln + 1);
    RunRecord r;
    r.index = c.runs.size();
    r.x.resize(m);
    for (std::size_t i = 0; i <= m; ++i) {
      const auto v = io::parse_double(fields[i]);
      if (!v || !std::isfinite(*v)) throw ParseError("non-numeric or non-finite value in column " + std::to_string(i + 1), ln + 1);
      if (i < m)
        r.x[i] = *v;
      else
        r.f = *v;
    }
    r.p = denormalize(r.x, c.space);
    r.status = RunStatus::Done;
    c.runs.push_back(std::move(r));
  }
  if (c.runs.empty()) throw ParseError("samples file has a header but no rows");
  return c;
}

Campaign load_dataset(const std::filesystem::path& path, const std::optional<ParameterSpace>& space) {
  return parse_dataset(io::read_file(path), space);
}

}  // namespace asuq
