// Acceptance run: one line per criterion, tolerances pinned below. Exits
// nonzero when any criterion fails.

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "asuq/active_subspace.hpp"
#include "asuq/evaluators.hpp"
#include "asuq/hyshot.hpp"
#include "asuq/param_space.hpp"
#include "asuq/surrogate.hpp"
#include "asuq/uq_analysis.hpp"
#include "oracles.hpp"

using namespace asuq;
namespace fs = std::filesystem;

namespace {

namespace tol {
constexpr double intercept = 1.0;        // K
constexpr double slope = 1e-6;           // K per J/kg
constexpr double area_ratio = 1.0;
constexpr double mach = 1e-6;
constexpr double eddy_ratio = 0.01;
constexpr double length_scale_rel = 0.03;
constexpr double exact_rel = 1e-12;      // "exactly" in floating point
constexpr double ridge_cos = 0.95;
constexpr double linear_cos = 1e-12;
constexpr double c_matrix_cos = 0.95;
constexpr double c_matrix_linear = 1e-10;
constexpr double bootstrap_exact = 1e-12;
constexpr double crossing = 1e-9;
constexpr double box_grid_step = 1e-3;
constexpr double box_volume = 1e-3;
constexpr double coeffs = 1e-10;
constexpr double r_squared_noisy = 0.99;
constexpr double cdf_half = 0.02;
}  // namespace tol

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail += (detail.empty() ? "" : "; ") + what;
    }
  }
};

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

struct Criterion {
  int id;
  std::string name;
  double budget_s;
  std::function<Outcome()> run;
};

ParameterSpace unit_space(std::size_t m) {
  std::vector<ParameterSpec> specs;
  for (std::size_t i = 0; i < m; ++i) specs.push_back({"x" + std::to_string(i + 1), -1.0, 0.0, 1.0, "-"});
  return ParameterSpace(specs);
}

Samples evaluate(const Matrix& x, const Evaluator& f) {
  Samples s;
  s.x = x;
  for (std::size_t j = 0; j < x.rows(); ++j) {
    s.f.push_back(f(EvalPoint{j, x.row(j), x.row(j)}));
    s.indices.push_back(j);
  }
  return s;
}

double abs_cos(std::span<const double> a, std::span<const double> b) {
  return std::abs(dot(a, b)) / (norm2(a) * norm2(b));
}

GradientFn ridge_gradient(const std::vector<double>& w, Link link) {
  return [w, link](std::span<const double> x) {
    const double d = link_derivative(link, dot(w, x));
    std::vector<double> g(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) g[i] = d * w[i];
    return g;
  };
}

Outcome c1_regression() {
  Outcome o;
  const auto fit = hyshot::fit_t0_h0(hyshot::default_shots());
  o.require(std::abs(fit.intercept - 508.1386) <= tol::intercept, fmt("intercept %.4f", fit.intercept));
  o.require(std::abs(fit.slope - 6.8718e-4) <= tol::slope, fmt("slope %.6e", fit.slope));
  o.detail = o.pass ? fmt("intercept %.4f K, slope %.5e", fit.intercept, fit.slope) : o.detail;
  return o;
}

Outcome c2_area_mach() {
  Outcome o;
  const double ratio = hyshot::area_mach_ratio(7.4, 1.4);
  const double mach = hyshot::supersonic_mach(ratio, 1.4);
  o.require(std::abs(ratio - 133.0) <= tol::area_ratio, fmt("A/A* %.4f", ratio));
  o.require(std::abs(mach - 7.4) <= tol::mach, fmt("M %.9f", mach));
  if (o.pass) o.detail = fmt("A/A* %.3f, inverse M %.9f", ratio, mach);
  return o;
}

Outcome c3_eddy_growth() {
  Outcome o;
  const double ratio = hyshot::eddy_growth_ratio();
  const auto n = hyshot::nominal_length_scale();
  const double rel = std::abs(n.length_scale - 0.245) / 0.245;
  o.require(std::abs(ratio - 9.43) <= tol::eddy_ratio, fmt("growth ratio %.5f vs 9.43 +- 0.01", ratio));
  o.require(rel <= tol::length_scale_rel, fmt("L %.4f m (%.2f%% off 245 mm)", n.length_scale, 100 * rel));
  const std::string tail = fmt("growth ratio %.5f, L %.1f mm (%.2f%% off 245 mm)", ratio, 1e3 * n.length_scale, 100 * rel);
  o.detail = o.pass ? tail : o.detail + " | " + tail;
  return o;
}

Outcome c4_parameter_table() {
  Outcome o;
  auto same = [](double a, double b) { return std::abs(a - b) <= tol::exact_rel * std::max(std::abs(a), std::abs(b)); };
  const auto ramp = hyshot::transition_range({0.145, 0.2});
  const auto cowl = hyshot::transition_range({0.050, 0.2});
  o.require(same(ramp.lo, 0.087) && same(ramp.hi, 0.203), fmt("ramp (%.15g, %.15g)", ramp.lo, ramp.hi));
  o.require(same(cowl.lo, 0.030) && same(cowl.hi, 0.070), fmt("cowl (%.15g, %.15g)", cowl.lo, cowl.hi));

  const auto space = default_space();
  const auto c = hyshot::build_inflow(std::vector<double>(7, 0.0), space);
  const double got[] = {c.p0, c.h0, c.alpha, c.intensity, c.length_scale, c.x_t_ramp, c.x_t_cowl};
  for (std::size_t i = 0; i < 7; ++i) {
    const double nominal = hyshot::to_si(space[i].nominal, space[i].units);
    o.require(same(got[i], nominal), space[i].name + " " + fmt("%.10g vs table %.10g", got[i], nominal));
  }
  if (o.pass) o.detail = "transition ranges and all 7 nominal values match";
  return o;
}

Outcome c5_direction_recovery() {
  Outcome o;
  constexpr std::size_t m = 7, M = 50;
  const auto space = unit_space(m);
  const auto x = sample_uniform(space, M, 2024);
  const auto wstar = random_unit_vector(m, 5);
  const auto ridge = fit_active_direction(evaluate(x, synthetic_ridge(wstar, Link::CubicMonotone)));
  const double c_ridge = abs_cos(ridge.w, wstar);
  o.require(c_ridge >= tol::ridge_cos, fmt("cubic ridge |cos| %.6f", c_ridge));
  const auto lin = fit_active_direction(evaluate(x, synthetic_ridge(wstar, Link::Linear)));
  const double c_lin = abs_cos(lin.w, wstar);
  o.require(std::abs(c_lin - 1.0) <= tol::linear_cos, fmt("linear |cos| - 1 = %.3e", c_lin - 1.0));
  if (o.pass) o.detail = fmt("cubic ridge |cos| %.6f, linear 1 - |cos| = %.2e", c_ridge, 1.0 - c_lin);
  return o;
}

Outcome c6_c_matrix() {
  Outcome o;
  constexpr std::size_t m = 7, M = 50, Nmc = 10000;
  const auto x = sample_uniform(unit_space(m), M, 31);
  const auto wstar = random_unit_vector(m, 8);
  double worst_lin = 1.0;
  double c_ridge = 0.0;
  for (Link link : {Link::CubicMonotone, Link::Linear}) {
    const auto as = fit_active_direction(evaluate(x, synthetic_ridge(wstar, link)));
    const auto est = estimate_c_gradient_oracle(ridge_gradient(wstar, link), m, Nmc, 77);
    const double c = abs_cos(est.eigenvector(0), as.w);
    if (link == Link::Linear) {
      worst_lin = c;
      o.require(c >= 1.0 - tol::c_matrix_linear, fmt("linear |cos| %.15f", c));
    } else {
      c_ridge = c;
      o.require(c >= tol::c_matrix_cos, fmt("cubic ridge |cos| %.6f", c));
    }
  }
  if (o.pass) o.detail = fmt("cubic ridge |cos| %.6f, linear 1 - |cos| = %.2e (N_mc = 1e4)", c_ridge, 1.0 - worst_lin);
  return o;
}

Outcome c7_bootstrap() {
  Outcome o;
  constexpr std::size_t m = 7, M = 50, N = 100;
  const auto x = sample_uniform(unit_space(m), M, 12);
  const auto wstar = random_unit_vector(m, 13);

  const auto lin = evaluate(x, synthetic_ridge(wstar, Link::Linear));
  const auto as_lin = fit_active_direction(lin);
  const auto ens_lin = bootstrap_direction(lin, as_lin, N, 99);
  double worst = 0.0;
  for (const auto& r : ens_lin.replicates)
    for (std::size_t i = 0; i < m; ++i) worst = std::max(worst, std::abs(r[i] - as_lin.w[i]));
  o.require(ens_lin.size() == N, "linear ensemble size");
  o.require(worst <= tol::bootstrap_exact, fmt("linear replicate deviation %.3e", worst));

  const auto ridge = evaluate(x, synthetic_ridge(wstar, Link::CubicMonotone, 0.05));
  const auto as = fit_active_direction(ridge);
  const auto ens = bootstrap_direction(ridge, as, N, 99);
  std::size_t inside = 0;
  for (std::size_t i = 0; i < m; ++i) {
    const auto comp = ens.component(i);
    const double q1 = quantile(comp, 0.25), q3 = quantile(comp, 0.75);
    const bool ok = q1 <= as.w[i] && as.w[i] <= q3;
    inside += ok;
    o.require(ok, fmt("component %.0f: w %.4f outside IQR [%.4f, %.4f]", static_cast<double>(i), as.w[i]) +
                      fmt(" [%.4f, %.4f]", q1, q3));
  }
  if (o.pass) o.detail = fmt("linear max deviation %.1e; ridge IQR contains w in %.0f/7 components", worst, inside);
  return o;
}

Outcome c8_corners() {
  Outcome o;
  std::mt19937_64 gen(8);
  std::normal_distribution<double> normal;
  std::size_t mismatches = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<double> w(7);
    for (auto& v : w) v = normal(gen);
    const double n = norm2(w);
    for (auto& v : w) v /= n;
    mismatches += corner_extrema(w).x_max != oracle::brute_force_argmax_corner(w);
  }
  o.require(mismatches == 0, fmt("%.0f of 1000 corner mismatches", static_cast<double>(mismatches)));

  std::size_t violations = 0;
  for (Link link : {Link::Linear, Link::CubicMonotone, Link::Logistic}) {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      const auto wstar = random_unit_vector(7, seed);
      const auto f = synthetic_ridge(wstar, link);
      const auto samples = evaluate(sample_uniform(unit_space(7), 50, seed + 100), f);
      const auto as = fit_active_direction(samples);
      const auto r = estimate_range(as.w, f, samples.f, unit_space(7), 50);
      for (double v : samples.f) violations += v < *r.f_min || v > *r.f_max;
    }
  }
  o.require(violations == 0, fmt("%.0f sample values outside the corner range", static_cast<double>(violations)));
  if (o.pass) o.detail = "1000/1000 corners match; 15 monotone ridges sandwich all 50 samples";
  return o;
}

QuadraticSurrogate fixture_surrogate(double reach, std::uint64_t seed) {
  std::vector<SummaryPoint> pts;
  for (std::size_t j = 0; j < 40; ++j) {
    CounterRng rng(seed, Stream::Noise, j);
    const double y = rng.uniform(-reach, reach);
    pts.push_back({y, 2.0 + y + 0.1 * y * y + 0.05 * rng.uniform(-1.0, 1.0)});
  }
  return fit_quadratic(pts, -reach, reach);
}

Outcome c9_safe_set() {
  Outcome o;
  const std::vector<double> w = {0.6, 0.8};
  const auto space = unit_space(2);
  const auto s = fixture_surrogate(1.4, 5);
  const double threshold = upper_confidence(s, 0.3, 0.99);
  const auto r = invert_safe_set(s, w, threshold, space);
  const double gap = std::abs(upper_confidence(s, r.orientation * r.y_max, 0.99) - threshold);
  o.require(r.feasible == Feasibility::Partial, "fixture crossing not partial");
  o.require(gap <= tol::crossing, fmt("crossing gap %.3e", gap));

  std::mt19937_64 gen(9);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> frac(0.02, 0.98);
  double worst = 0.0;
  for (std::size_t m : {1u, 2u, 3u}) {
    for (int trial = 0; trial < 5; ++trial) {
      std::vector<double> v(m);
      for (auto& c : v) c = normal(gen);
      const double n = norm2(v);
      for (auto& c : v) c /= n;
      const auto corners = corner_extrema(v);
      const double b = frac(gen) * 2.0 * norm1(v);
      const auto box = inscribed_box(v, b + dot(v, corners.x_min), corners.x_min);
      double vol = 1.0;
      for (double side : box.sides) vol *= side;
      worst = std::max(worst, std::abs(vol - oracle::grid_best_volume(v, b, tol::box_grid_step)));
    }
  }
  o.require(worst <= tol::box_volume, fmt("box volume gap %.3e", worst));

  const std::vector<double> w3 = {0.48, -0.6, 0.64};
  const auto s3 = fixture_surrogate(norm1(w3), 17);
  const double lo = upper_confidence(s3, -norm1(w3), 0.99), hi = upper_confidence(s3, norm1(w3), 0.99);
  std::size_t breaks = 0;
  SafeSetResult prev = invert_safe_set(s3, w3, lo - 0.1, unit_space(3));
  for (int k = 1; k <= 20; ++k) {
    const auto cur = invert_safe_set(s3, w3, lo - 0.1 + (hi - lo + 0.2) * k / 20.0, unit_space(3));
    breaks += cur.y_max < prev.y_max;
    for (std::size_t i = 0; i < 3; ++i)
      breaks += cur.box_lo[i] > prev.box_lo[i] + 1e-12 || cur.box_hi[i] < prev.box_hi[i] - 1e-12;
    prev = cur;
  }
  o.require(breaks == 0, fmt("%.0f monotonicity breaks over 20 thresholds", static_cast<double>(breaks)));
  if (o.pass) o.detail = fmt("crossing gap %.1e, worst box volume gap %.1e, 20-threshold sweep nested", gap, worst);
  return o;
}

Outcome c10_surrogate() {
  Outcome o;
  std::vector<SummaryPoint> exact, noisy;
  for (std::size_t j = 0; j < 12; ++j) {
    CounterRng rng(10, Stream::Noise, j);
    const double y = rng.uniform(-2.0, 2.0);
    exact.push_back({y, 2.0 + 0.5 * y + 0.1 * y * y});
  }
  const auto s = fit_quadratic(exact, -2.0, 2.0);
  const double err = std::max({std::abs(s.coeffs[0] - 2.0), std::abs(s.coeffs[1] - 0.5), std::abs(s.coeffs[2] - 0.1)});
  o.require(err <= tol::coeffs, fmt("coefficient error %.3e", err));
  o.require(std::abs(s.r_squared - 1.0) <= tol::coeffs, fmt("exact R^2 %.15f", s.r_squared));
  double band = 0.0;
  for (double y = -2.0; y <= 2.0; y += 0.25)
    band = std::max(band, std::abs(upper_confidence(s, y, 0.99) - predict(s, y)) / std::abs(predict(s, y)));
  o.require(band <= 1e-6, fmt("zero-RSS band relative width %.3e", band));

  // g spans [1.4, 3.4] on [-2, 2]; noise at 1% of that span
  for (std::size_t j = 0; j < 50; ++j) {
    CounterRng rng(11, Stream::Noise, j);
    const double y = rng.uniform(-2.0, 2.0);
    noisy.push_back({y, 2.0 + 0.5 * y + 0.1 * y * y + 0.02 * rng.uniform(-1.0, 1.0)});
  }
  const auto n = fit_quadratic(noisy, -2.0, 2.0);
  o.require(n.r_squared >= tol::r_squared_noisy, fmt("noisy R^2 %.5f", n.r_squared));
  if (o.pass) o.detail = fmt("coefficient error %.1e, noisy R^2 %.5f, zero-RSS band %.1e", err, n.r_squared, band);
  return o;
}

Outcome c11_cdf() {
  Outcome o;
  QuadraticSurrogate lin;
  lin.coeffs = {0.0, 1.0, 0.0};
  const auto a = estimate_cdf(lin, std::vector<double>{1.0}, 2026, {.samples = 5000});
  const auto b = estimate_cdf(lin, std::vector<double>{1.0}, 2026, {.samples = 5000});
  const double mid = a.at(0.0);
  o.require(std::abs(mid - 0.5) <= tol::cdf_half, fmt("CDF(0) %.5f", mid));
  bool monotone = true;
  for (std::size_t k = 1; k < a.cdf.size(); ++k) monotone = monotone && a.cdf[k] >= a.cdf[k - 1];
  o.require(monotone, "CDF decreases on the grid");
  o.require(a.grid == b.grid && a.cdf == b.cdf, "same seed gave a different CDF");
  if (o.pass) o.detail = fmt("CDF(0) = %.5f at n = 5000, monotone, reproducible", mid);
  return o;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome c12_end_to_end() {
  Outcome o;
  std::string tmpl = (fs::temp_directory_path() / "asuq-accept-XXXXXX").string();
  const fs::path dir = ::mkdtemp(tmpl.data());
  auto sh = [&](const std::string& args) {
    const std::string cmd = "cd '" + dir.string() + "' && '" + ASUQ_CLI + "' " + args + " >/dev/null 2>>log.txt";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  };
  const std::string eval = " --evaluator ridge:cubic --wtrue-seed 3 --noise 0.01";
  for (const char* tag : {"a", "b"}) {
    const std::string c = std::string(tag) + ".json";
    o.require(sh("sample -M 50 --seed 7 -o " + c) == 0, std::string("sample ") + tag);
    o.require(sh("run --campaign " + c + eval) == 0, std::string("run ") + tag);
    o.require(sh("analyze --campaign " + c + " --seed 11 -N 100 --corners" + eval +
                 " --threshold 0.5 --level 0.99 --cdf --n 5000 --out out_" + tag) == 0,
              std::string("analyze ") + tag);
  }
  o.require(slurp(dir / "a.json") == slurp(dir / "b.json"), "campaign files differ");
  std::size_t compared = 0;
  for (const char* name : {"results.json", "summary.csv", "surrogate.json", "range.json", "safeset.json", "cdf.csv",
                           "cdf.svg", "summary.svg"}) {
    const auto pa = dir / "out_a" / name, pb = dir / "out_b" / name;
    o.require(fs::exists(pa), std::string("missing ") + name);
    o.require(slurp(pa) == slurp(pb), std::string(name) + " differs");
    ++compared;
  }
  if (!o.pass && fs::exists(dir / "log.txt")) o.detail += " | " + slurp(dir / "log.txt");
  fs::remove_all(dir);
  if (o.pass) o.detail = fmt("m = 7, M = 50, N = 100; campaign and %.0f artifacts byte-identical", compared);
  return o;
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "T0-H0 regression", 1.0, c1_regression},
      {2, "area-Mach relation", 1.0, c2_area_mach},
      {3, "eddy growth and length scale", 1.0, c3_eddy_growth},
      {4, "parameter table", 1.0, c4_parameter_table},
      {5, "active direction recovery", 1.0, c5_direction_recovery},
      {6, "C-matrix equivalence", 5.0, c6_c_matrix},
      {7, "bootstrap sanity", 2.0, c7_bootstrap},
      {8, "corner range heuristic", 5.0, c8_corners},
      {9, "safe set and inscribed box", 10.0, c9_safe_set},
      {10, "quadratic surrogate", 1.0, c10_surrogate},
      {11, "CDF", 2.0, c11_cdf},
      {12, "end to end", 30.0, c12_end_to_end},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("threw: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs > c.budget_s) o.require(false, fmt("took %.2f s, budget %.0f s", secs, c.budget_s));
    failed += !o.pass;
    std::printf("[%s] criterion %2d  %-30s %7.3f s  %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name.c_str(), secs,
                o.detail.c_str());
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
