// asuq: command-line front end for the active-subspace UQ pipeline.
//
//   asuq sample  --space S -M 50 --seed 7 -o campaign.json
//   asuq run     --campaign campaign.json --evaluator ridge:cubic --wtrue-seed 3
//   asuq analyze --campaign campaign.json --seed 11 --threshold 2.8 --cdf
//
// Exit codes: 0 success, 1 usage, 2 data/schema, 3 numerical, 4 evaluator.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "asuq/active_subspace.hpp"
#include "asuq/campaign.hpp"
#include "asuq/errors.hpp"
#include "asuq/evaluators.hpp"
#include "asuq/hyshot.hpp"
#include "asuq/io.hpp"
#include "asuq/reports.hpp"
#include "asuq/subprocess.hpp"
#include "asuq/surrogate.hpp"
#include "asuq/uq_analysis.hpp"

namespace fs = std::filesystem;
using namespace asuq;

namespace {

fs::path default_out_dir() {
  if (const char* env = std::getenv("ASUQ_OUT_DIR"); env && *env) return env;
  return ".";
}

void write_output(const fs::path& path, const std::string& contents) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  io::write_file_atomic(path, contents);
  std::cerr << "wrote " << path.string() << "\n";
}

ParameterSpace space_or_default(const std::string& path) { return path.empty() ? default_space() : load_space(path); }

// Evaluator flags shared by run, analyze --corners and range.
struct EvaluatorOptions {
  std::string builtin;  // ridge:<link>
  std::optional<std::uint64_t> wtrue_seed;
  double noise = 0.0;
  std::string command;
  bool inflow_params = false;
  std::optional<double> timeout;

  void add(CLI::App* app) {
    app->add_option("--evaluator", builtin, "Built-in synthetic evaluator, ridge:<linear|cubic|logistic|quadratic>");
    app->add_option("--wtrue-seed", wtrue_seed, "Seed of the hidden ridge direction");
    app->add_option("--noise", noise, "Deterministic noise amplitude of the ridge")->check(CLI::NonNegativeNumber);
    app->add_option("--command", command, "External solver command (JSON on stdin, {\"qoi\": x} on stdout)");
    app->add_flag("--inflow-params", inflow_params, "Send HyShot inflow boundary conditions instead of raw parameters");
    app->add_option("--timeout", timeout, "Per-run timeout in seconds")->check(CLI::PositiveNumber);
  }

  bool given() const { return !builtin.empty() || !command.empty(); }

  Evaluator make(const ParameterSpace& space, const nlohmann::ordered_json& condition) const {
    if (!builtin.empty() && !command.empty()) throw UsageError("--evaluator and --command are mutually exclusive");
    if (!builtin.empty()) {
      const auto colon = builtin.find(':');
      if (builtin.substr(0, colon) != "ridge") throw UsageError("unknown evaluator '" + builtin + "'");
      const auto link = parse_link(colon == std::string::npos ? "linear" : builtin.substr(colon + 1));
      if (!wtrue_seed) throw UsageError("--evaluator ridge needs --wtrue-seed");
      return synthetic_ridge(random_unit_vector(space.dimension(), *wtrue_seed), link, noise);
    }
    if (command.empty()) throw UsageError("no evaluator: pass --evaluator ridge:<link> or --command");
    if (!command_available(command)) throw UsageError("evaluator command not found: " + command);
    ExternalCommand spec;
    spec.command = command;
    spec.condition = condition;
    if (timeout) spec.timeout = std::chrono::milliseconds(static_cast<long long>(*timeout * 1000.0));
    if (inflow_params) {
      space_has_inflow_names(space);
      spec.encode = [space](const EvalPoint& pt) { return hyshot::inflow_params(hyshot::build_inflow(pt.x, space)); };
    } else {
      spec.encode = raw_params_encoder(space);
    }
    return external_evaluator(std::move(spec));
  }

  static void space_has_inflow_names(const ParameterSpace& space) {
    for (auto name : hyshot::kParameterNames)
      if (!space.index_of(name)) throw SchemaError("--inflow-params: space lacks '" + std::string(name) + "'");
  }
};

// Input selection shared by the analysis commands.
struct DataOptions {
  std::string campaign;
  std::string samples;
  std::string space;

  void add(CLI::App* app) {
    auto* c = app->add_option("--campaign", campaign, "Campaign manifest")->check(CLI::ExistingFile);
    auto* s = app->add_option("--samples", samples, "Samples CSV (x1..xm,f)")->check(CLI::ExistingFile);
    c->excludes(s);
    app->add_option("--space", space, "Parameter space for --samples")->check(CLI::ExistingFile);
  }

  Campaign load() const {
    if (!campaign.empty()) return load_campaign(campaign);
    if (!samples.empty()) {
      std::optional<ParameterSpace> sp;
      if (!space.empty()) sp = load_space(space);
      return load_dataset(samples, sp);
    }
    throw UsageError("pass --campaign or --samples");
  }
};

Samples require_samples(const Campaign& c) {
  auto s = c.done_samples();
  const std::size_t m = c.dimension();
  if (s.size() < minimum_samples(m))
    throw RankError("only " + std::to_string(s.size()) + " done runs for m = " + std::to_string(m) +
                        " inputs; the linear fit needs M >= m+1 = " + std::to_string(minimum_samples(m)) +
                        " (recommended M ~ m^2 = " + std::to_string(recommended_samples(m)) +
                        "). Sample and run more points",
                    s.size());
  if (s.size() < recommended_samples(m))
    std::cerr << "note: M = " << s.size() << " is below the recommended m^2 = " << recommended_samples(m) << "\n";
  return s;
}

std::vector<std::string> names_of(const ParameterSpace& space) { return space.names(); }

int cmd_space_validate(const std::string& path) {
  const auto space = space_or_default(path);
  std::cout << "valid parameter space, m = " << space.dimension() << "\n";
  for (const auto& p : space.params())
    std::cout << "  " << p.name << " [" << p.units << "]: " << io::format_double(p.min) << " / "
              << io::format_double(p.nominal) << " / " << io::format_double(p.max) << "\n";
  return 0;
}

void print_check(const std::string& what, double got, double ref, double tol) {
  const double dev = got - ref;
  std::cout << (std::abs(dev) <= tol ? "  ok    " : "  DIFF  ") << what << ": " << io::format_double(got)
            << " (reference " << io::format_double(ref) << ", deviation " << io::format_double(dev) << ")\n";
}

int cmd_scenario_check() {
  const auto shots = hyshot::default_shots();
  const auto rel = hyshot::fit_t0_h0(shots);
  std::cout << "T0-H0 regression over the non-excluded shots\n";
  print_check("intercept [K]", rel.intercept, hyshot::kReferenceT0H0.intercept, 1.0);
  print_check("slope [K kg/J]", rel.slope, hyshot::kReferenceT0H0.slope, 1e-6);
  std::cout << "nozzle\n";
  const auto noz = hyshot::nominal_length_scale();
  print_check("A/A* at M = 7.4", noz.area_ratio, 133.0, 1.0);
  print_check("eddy growth ratio", noz.growth_ratio, 9.43, 0.01);
  print_check("nominal L_t,omega [m]", noz.length_scale, 0.245, 0.03 * 0.245);
  std::cout << "transition ranges\n";
  const auto ramp = hyshot::transition_range({0.145});
  const auto cowl = hyshot::transition_range({0.050});
  print_check("ramp lo [m]", ramp.lo, 0.087, 1e-12);
  print_check("ramp hi [m]", ramp.hi, 0.203, 1e-12);
  print_check("cowl lo [m]", cowl.lo, 0.030, 1e-12);
  print_check("cowl hi [m]", cowl.hi, 0.070, 1e-12);
  std::cout << "nominal inflow vs. table nominal column\n";
  const auto space = default_space();
  const std::vector<double> zero(space.dimension(), 0.0);
  const auto in = hyshot::build_inflow(zero, space);
  const double got[] = {in.p0, in.h0, in.alpha, in.intensity, in.length_scale, in.x_t_ramp, in.x_t_cowl};
  for (std::size_t k = 0; k < 7; ++k) {
    const auto& p = space[*space.index_of(hyshot::kParameterNames[k])];
    const double ref = hyshot::to_si(p.nominal, p.units);
    print_check(p.name, got[k], ref, 1e-12 * std::abs(ref));
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Active-subspace uncertainty quantification toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "asuq 0.1.0");

  // space validate
  auto* space_cmd = app.add_subcommand("space", "Parameter-space utilities")->require_subcommand(1);
  std::string space_path;
  auto* space_validate = space_cmd->add_subcommand("validate", "Check a parameter-space file");
  space_validate->add_option("space", space_path, "Space JSON (bundled HyShot space when omitted)");

  // sample
  auto* sample = app.add_subcommand("sample", "Draw M uniform samples into a new campaign");
  std::string sample_space, sample_out, condition_text;
  std::size_t sample_m = 0;
  std::optional<std::uint64_t> sample_seed;
  sample->add_option("--space", sample_space, "Space JSON (bundled HyShot space when omitted)")
      ->check(CLI::ExistingFile);
  sample->add_option("-M,--count", sample_m, "Number of samples")->required();
  sample->add_option("--seed", sample_seed, "Random seed")->required();
  sample->add_option("-o,--output", sample_out, "Campaign manifest to write");
  sample->add_option("--condition", condition_text, "Condition object (JSON) passed to every run");

  // run
  auto* run = app.add_subcommand("run", "Evaluate the pending runs of a campaign");
  std::string run_campaign;
  EvaluatorOptions run_eval;
  std::size_t max_concurrency = 1;
  bool retry_failed = false, record_timing = false;
  run->add_option("--campaign", run_campaign, "Campaign manifest")->required()->check(CLI::ExistingFile);
  run_eval.add(run);
  run->add_option("--max-concurrency", max_concurrency, "Concurrent evaluations")->check(CLI::PositiveNumber);
  run->add_flag("--retry-failed", retry_failed, "Re-evaluate failed runs");
  run->add_flag("--record-timing", record_timing, "Store wall times in the manifest");

  // analyze
  auto* analyze = app.add_subcommand("analyze", "Fit w, bootstrap, surrogate, and optional range/safe set/CDF");
  DataOptions an_data;
  EvaluatorOptions an_eval;
  std::optional<std::uint64_t> an_seed;
  std::size_t an_n = kDefaultBootstrapReplicates;
  bool an_corners = false, an_cdf = false, an_no_svg = false;
  std::optional<double> an_threshold;
  double an_level = 0.99;
  std::size_t an_cdf_n = 5000, an_grid = 512;
  std::string an_out;
  an_data.add(analyze);
  analyze->add_option("--seed", an_seed, "Seed for bootstrap and CDF sampling")->required();
  analyze->add_option("-N,--bootstrap", an_n, "Bootstrap replicates");
  analyze->add_flag("--corners", an_corners, "Evaluate the two range corners");
  an_eval.add(analyze);
  analyze->add_option("--threshold", an_threshold, "Output threshold for the safe set");
  analyze->add_option("--level", an_level, "Confidence level of the upper bound");
  analyze->add_flag("--cdf", an_cdf, "Estimate the output CDF from the surrogate");
  analyze->add_option("--n", an_cdf_n, "CDF Monte Carlo samples")->check(CLI::PositiveNumber);
  analyze->add_option("--grid", an_grid, "CDF grid points")->check(CLI::PositiveNumber);
  analyze->add_option("--out", an_out, "Output directory (default $ASUQ_OUT_DIR or .)");
  analyze->add_flag("--no-svg", an_no_svg, "Skip SVG renderings");

  // range
  auto* range = app.add_subcommand("range", "Corner-extrema range estimate");
  DataOptions rg_data;
  EvaluatorOptions rg_eval;
  std::string rg_out;
  rg_data.add(range);
  rg_eval.add(range);
  range->add_option("--out", rg_out, "Output directory");

  // safeset
  auto* safeset = app.add_subcommand("safeset", "Invert the surrogate's upper bound for a threshold");
  DataOptions ss_data;
  double ss_threshold = 0.0, ss_level = 0.99;
  std::string ss_out;
  ss_data.add(safeset);
  safeset->add_option("--threshold", ss_threshold, "Output threshold")->required();
  safeset->add_option("--level", ss_level, "Confidence level");
  safeset->add_option("--out", ss_out, "Output directory");

  // cdf
  auto* cdf = app.add_subcommand("cdf", "Output CDF through the quadratic surrogate");
  DataOptions cdf_data;
  std::optional<std::uint64_t> cdf_seed;
  std::size_t cdf_n = 5000, cdf_grid = 512;
  std::string cdf_out;
  cdf_data.add(cdf);
  cdf->add_option("--seed", cdf_seed, "Sampling seed")->required();
  cdf->add_option("--n", cdf_n, "Monte Carlo samples")->check(CLI::PositiveNumber);
  cdf->add_option("--grid", cdf_grid, "Grid points")->check(CLI::PositiveNumber);
  cdf->add_option("--out", cdf_out, "Output directory");

  // scenario
  auto* scenario = app.add_subcommand("scenario", "HyShot II input characterization")->require_subcommand(1);
  auto* shots_fit = scenario->add_subcommand("shots-fit", "Regress T0 on H0 over the shot table");
  std::string shots_path;
  bool include_excluded = false;
  shots_fit->add_option("--shots", shots_path, "Shots CSV (bundled table when omitted)")->check(CLI::ExistingFile);
  shots_fit->add_flag("--include-excluded", include_excluded, "Keep the shots flagged as excluded");
  auto* inflow = scenario->add_subcommand("inflow", "Inflow boundary condition at a normalized point");
  std::string inflow_space;
  std::vector<double> inflow_x;
  inflow->add_option("--space", inflow_space, "Space JSON (bundled HyShot space when omitted)")
      ->check(CLI::ExistingFile);
  inflow->add_option("--x", inflow_x, "Normalized coordinates (nominal point when omitted)")->delimiter(',');
  auto* check = scenario->add_subcommand("check", "Reproduce the scenario arithmetic and print deviations");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return static_cast<int>(ErrorKind::Usage);
  }

  try {
    if (*space_validate) return cmd_space_validate(space_path);

    if (*sample) {
      if (sample_m < 1) throw UsageError("-M must be at least 1");
      auto condition = nlohmann::ordered_json::object();
      if (!condition_text.empty()) {
        condition = nlohmann::ordered_json::parse(condition_text, nullptr, false);
        if (!condition.is_object()) throw UsageError("--condition must be a JSON object");
      }
      const auto c = Campaign::create(space_or_default(sample_space), sample_m, *sample_seed, condition);
      write_output(sample_out.empty() ? default_out_dir() / "campaign.json" : fs::path(sample_out),
                   serialize_campaign(c));
      std::cout << "campaign: " << c.runs.size() << " pending runs, m = " << c.dimension() << "\n";
      return 0;
    }

    if (*run) {
      auto c = load_campaign(run_campaign);
      const auto evaluator = run_eval.make(c.space, c.condition);
      DispatchOptions opts;
      opts.max_concurrency = max_concurrency;
      opts.retry_failed = retry_failed;
      opts.record_timing = record_timing;
      opts.on_update = [&](const Campaign& snapshot) { save_campaign(snapshot, run_campaign); };
      EvaluationSummary summary;
      try {
        summary = evaluate_campaign(c, evaluator, opts);
      } catch (const EvaluationError&) {
        save_campaign(c, run_campaign);
        throw;
      }
      save_campaign(c, run_campaign);
      std::cout << "attempted " << summary.attempted << ", done " << summary.done << ", failed " << summary.failed
                << "; campaign: " << c.count(RunStatus::Done) << " done, " << c.count(RunStatus::Failed)
                << " failed, " << c.count(RunStatus::Pending) << " pending\n";
      for (const auto& r : c.runs)
        if (r.status == RunStatus::Failed) std::cerr << "run " << r.index << " failed: " << r.error << "\n";
      const bool ok = c.count(RunStatus::Done) >= 1 && c.count(RunStatus::Failed) == 0;
      return ok ? 0 : static_cast<int>(ErrorKind::Evaluation);
    }

    if (*analyze) {
      if (an_corners && !an_eval.given()) throw UsageError("--corners needs --evaluator or --command");
      if (an_n < 1) throw UsageError("-N must be at least 1");
      const fs::path out = an_out.empty() ? default_out_dir() : fs::path(an_out);
      const auto c = an_data.load();
      const auto s = require_samples(c);
      const auto as = fit_active_direction(s);
      const auto names = names_of(c.space);
      const auto ranking = sensitivity_ranking(as, names);
      const auto ensemble = bootstrap_direction(s, as, an_n, *an_seed);
      const auto summary = summary_data(s, as, &ensemble);
      std::cout << reports::ranking_table(ranking);
      write_output(out / "results.json", reports::dump(reports::results_json(as, ranking, &ensemble)));
      write_output(out / "summary.csv", reports::summary_csv(summary));

      std::optional<QuadraticSurrogate> sur;
      try {
        sur = fit_quadratic(summary, as);
        write_output(out / "surrogate.json", reports::dump(reports::surrogate_json(*sur)));
        std::cout << "quadratic surrogate R^2 = " << io::format_double(sur->r_squared) << "\n";
      } catch (const RankError& e) {
        if (an_threshold || an_cdf) throw;
        std::cerr << "note: no surrogate: " << e.what() << "\n";
      }

      if (an_corners) {
        const auto evaluator = an_eval.make(c.space, c.condition);
        const auto r = estimate_range(as.w, evaluator, s.f, c.space, c.runs.size(), summary.discordant_pairs);
        write_output(out / "range.json", reports::dump(reports::range_json(r, c.space)));
        std::cout << "range [" << io::format_double(*r.f_min) << ", " << io::format_double(*r.f_max) << "]"
                  << (r.validated ? "" : " (does not bound every sample)") << "\n";
      }
      if (an_threshold) {
        const auto r = invert_safe_set(*sur, as.w, *an_threshold, c.space, an_level);
        write_output(out / "safeset.json", reports::dump(reports::safeset_json(r)));
        std::cout << "safe set: " << to_string(r.feasible) << ", y_max = " << io::format_double(r.y_max) << "\n";
      }
      if (an_cdf) {
        CdfOptions o;
        o.samples = an_cdf_n;
        o.grid_size = an_grid;
        const auto e = estimate_cdf(*sur, as.w, *an_seed, o);
        write_output(out / "cdf.csv", reports::cdf_csv(e));
        if (!an_no_svg) write_output(out / "cdf.svg", reports::cdf_svg(e));
      }
      if (!an_no_svg) {
        reports::BandSpec band;
        band.surrogate = sur ? &*sur : nullptr;
        band.level = an_level;
        band.threshold = an_threshold;
        write_output(out / "summary.svg", reports::summary_svg(summary, band));
      }
      return 0;
    }

    if (*range) {
      const fs::path out = rg_out.empty() ? default_out_dir() : fs::path(rg_out);
      const auto c = rg_data.load();
      const auto s = require_samples(c);
      const auto as = fit_active_direction(s);
      const auto summary = summary_data(s, as);
      const auto evaluator = rg_eval.make(c.space, c.condition);
      const auto r = estimate_range(as.w, evaluator, s.f, c.space, c.runs.size(), summary.discordant_pairs);
      write_output(out / "range.json", reports::dump(reports::range_json(r, c.space)));
      std::cout << "range [" << io::format_double(*r.f_min) << ", " << io::format_double(*r.f_max) << "]\n";
      return 0;
    }

    if (*safeset) {
      const fs::path out = ss_out.empty() ? default_out_dir() : fs::path(ss_out);
      const auto c = ss_data.load();
      const auto s = require_samples(c);
      const auto as = fit_active_direction(s);
      const auto sur = fit_quadratic(summary_data(s, as), as);
      const auto r = invert_safe_set(sur, as.w, ss_threshold, c.space, ss_level);
      write_output(out / "safeset.json", reports::dump(reports::safeset_json(r)));
      std::cout << "safe set: " << to_string(r.feasible) << ", y_max = " << io::format_double(r.y_max) << "\n";
      for (const auto& sr : r.safe_ranges)
        std::cout << "  " << sr.name << " [" << sr.units << "]: " << io::format_double(sr.lo) << " .. "
                  << io::format_double(sr.hi) << (sr.restricted ? "  (restricted)" : "") << "\n";
      return 0;
    }

    if (*cdf) {
      const fs::path out = cdf_out.empty() ? default_out_dir() : fs::path(cdf_out);
      const auto c = cdf_data.load();
      const auto s = require_samples(c);
      const auto as = fit_active_direction(s);
      const auto sur = fit_quadratic(summary_data(s, as), as);
      CdfOptions o;
      o.samples = cdf_n;
      o.grid_size = cdf_grid;
      const auto e = estimate_cdf(sur, as.w, *cdf_seed, o);
      write_output(out / "cdf.csv", reports::cdf_csv(e));
      return 0;
    }

    if (*shots_fit) {
      const auto shots = shots_path.empty() ? hyshot::default_shots() : hyshot::load_shots(shots_path);
      const auto rel = hyshot::fit_t0_h0(shots, include_excluded);
      std::size_t used = 0;
      for (const auto& sh : shots) used += (include_excluded || !sh.excluded) ? 1 : 0;
      std::cout << "T0 = " << io::format_double(rel.intercept) << " + " << io::format_double(rel.slope)
                << " * H0   (K, J/kg; " << used << " shots)\n";
      return 0;
    }

    if (*inflow) {
      const auto space = space_or_default(inflow_space);
      if (inflow_x.empty()) inflow_x.assign(space.dimension(), 0.0);
      if (inflow_x.size() != space.dimension())
        throw DimensionError("--x has " + std::to_string(inflow_x.size()) + " values, space has " +
                             std::to_string(space.dimension()));
      const auto c = hyshot::build_inflow(inflow_x, space);
      for (const auto& w : c.warnings) std::cerr << "warning: " << w << "\n";
      std::cout << reports::dump(hyshot::inflow_params(c));
      return 0;
    }

    if (*check) return cmd_scenario_check();
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return static_cast<int>(e.kind());
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return static_cast<int>(ErrorKind::Data);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return static_cast<int>(ErrorKind::Data);
  }
  return 0;
}
