#include "asuq/reports.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "asuq/io.hpp"

namespace asuq::reports {

using nlohmann::ordered_json;

std::string dump(const ordered_json& j) { return j.dump(2) + "\n"; }

ordered_json results_json(const ActiveSubspace& as, std::span<const RankedParameter> ranking,
                          const BootstrapEnsemble* ensemble) {
  ordered_json j;
  j["w"] = as.w;
  j["u_hat"] = as.fit.u_hat;
  j["residual_norm"] = as.fit.residual_norm;
  j["M"] = as.sample_count;
  auto& rank = j["ranking"] = ordered_json::array();
  for (const auto& r : ranking)
    rank.push_back({{"name", r.name}, {"index", r.index}, {"weight", r.weight}, {"magnitude", r.magnitude}});
  if (ensemble) {
    ordered_json b;
    b["N"] = ensemble->size();
    b["seed"] = ensemble->seed;
    b["attempts"] = ensemble->attempts;
    b["replicates"] = ensemble->replicates;
    auto& q = b["quantiles"] = ordered_json::object();
    for (double level : kReportQuantiles) {
      std::vector<double> row(as.w.size());
      for (std::size_t i = 0; i < as.w.size(); ++i) row[i] = quantile(ensemble->component(i), level);
      q[io::format_double(level)] = row;
    }
    j["bootstrap"] = std::move(b);
  }
  return j;
}

std::string summary_csv(const SummaryData& data) {
  std::string out = "y,f,source\n";
  auto rows = [&](const std::vector<SummaryPoint>& pts, const char* source) {
    for (const auto& p : pts) out += io::format_double(p.y) + "," + io::format_double(p.f) + "," + source + "\n";
  };
  rows(data.points, "sample");
  rows(data.bootstrap_cloud, "bootstrap");
  return out;
}

ordered_json surrogate_json(const QuadraticSurrogate& s) {
  ordered_json j;
  j["coeffs"] = s.coeffs;
  j["sigma2_hat"] = s.sigma2_hat ? ordered_json(*s.sigma2_hat) : ordered_json(nullptr);
  auto& g = j["gram_inverse"] = ordered_json::array();
  for (std::size_t r = 0; r < 3; ++r) g.push_back(s.gram_inverse.row(r));
  j["M"] = s.sample_count;
  j["r_squared"] = s.r_squared;
  if (s.degenerate_tss) j["degenerate_tss"] = true;
  j["y_domain"] = {s.y_lo, s.y_hi};
  return j;
}

ordered_json range_json(const RangeEstimate& r, const ParameterSpace& space) {
  ordered_json j;
  j["x_min"] = {{"normalized", r.corners.x_min}, {"physical", denormalize(r.corners.x_min, space)}};
  j["x_max"] = {{"normalized", r.corners.x_max}, {"physical", denormalize(r.corners.x_max, space)}};
  j["f_min"] = r.f_min ? ordered_json(*r.f_min) : ordered_json(nullptr);
  j["f_max"] = r.f_max ? ordered_json(*r.f_max) : ordered_json(nullptr);
  j["f_min_at"] = r.flipped ? "x_max" : "x_min";
  j["validated"] = r.validated;
  if (r.nonmonotone_caveat)
    j["caveat"] = "summary plot is not monotone; corner values may not bound the output";
  if (!r.errors.empty()) j["errors"] = r.errors;
  return j;
}

ordered_json safeset_json(const SafeSetResult& r) {
  ordered_json j;
  j["threshold"] = r.threshold;
  j["level"] = r.level;
  j["direction"] = r.orientation > 0 ? "w" : "-w";
  j["y_max"] = r.y_max;
  j["feasible"] = to_string(r.feasible);
  j["box_sides"] = r.box.sides;
  j["box_lo"] = r.box_lo;
  j["box_hi"] = r.box_hi;
  auto& ranges = j["safe_ranges"] = ordered_json::array();
  for (const auto& s : r.safe_ranges)
    ranges.push_back(
        {{"name", s.name}, {"units", s.units}, {"lo", s.lo}, {"hi", s.hi}, {"restricted", s.restricted}});
  return j;
}

std::string cdf_csv(const CdfEstimate& c) {
  std::string out = "q,cdf\n";
  for (std::size_t k = 0; k < c.grid.size(); ++k)
    out += io::format_double(c.grid[k]) + "," + io::format_double(c.cdf[k]) + "\n";
  return out;
}

std::string ranking_table(std::span<const RankedParameter> ranking) {
  std::size_t width = 9;
  for (const auto& r : ranking) width = std::max(width, r.name.size());
  std::string out;
  char buf[256];
  std::snprintf(buf, sizeof buf, "%-4s %-*s %10s\n", "rank", static_cast<int>(width), "parameter", "w_i");
  out += buf;
  for (std::size_t k = 0; k < ranking.size(); ++k) {
    std::snprintf(buf, sizeof buf, "%-4zu %-*s %+10.4f\n", k + 1, static_cast<int>(width), ranking[k].name.c_str(),
                  ranking[k].weight);
    out += buf;
  }
  return out;
}

namespace {

constexpr double kWidth = 640, kHeight = 400, kLeft = 64, kRight = 16, kTop = 16, kBottom = 48;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

class Canvas {
 public:
  Canvas(double x0, double x1, double y0, double y1) : x0_(x0), x1_(x1), y0_(y0), y1_(y1) {
    pad(x0_, x1_);
    pad(y0_, y1_);
    out_ << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
         << "\" font-family=\"sans-serif\" font-size=\"11\">\n"
         << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  }

  double px(double x) const { return kLeft + (x - x0_) / (x1_ - x0_) * (kWidth - kLeft - kRight); }
  double py(double y) const { return kHeight - kBottom - (y - y0_) / (y1_ - y0_) * (kHeight - kTop - kBottom); }

  void axes(const std::string& xlabel, const std::string& ylabel) {
    const double bx = kLeft, by = kHeight - kBottom;
    out_ << "<g stroke=\"black\" fill=\"none\">"
         << "<rect x=\"" << num(bx) << "\" y=\"" << num(kTop) << "\" width=\"" << num(kWidth - kLeft - kRight)
         << "\" height=\"" << num(kHeight - kTop - kBottom) << "\"/></g>\n";
    for (int k = 0; k <= 4; ++k) {
      const double xv = x0_ + (x1_ - x0_) * k / 4.0;
      const double yv = y0_ + (y1_ - y0_) * k / 4.0;
      out_ << "<text x=\"" << num(px(xv)) << "\" y=\"" << num(by + 16) << "\" text-anchor=\"middle\">" << label(xv)
           << "</text>\n";
      out_ << "<text x=\"" << num(bx - 6) << "\" y=\"" << num(py(yv) + 4) << "\" text-anchor=\"end\">" << label(yv)
           << "</text>\n";
    }
    out_ << "<text x=\"" << num(kLeft + 0.5 * (kWidth - kLeft - kRight)) << "\" y=\"" << num(kHeight - 8)
         << "\" text-anchor=\"middle\">" << xlabel << "</text>\n";
    out_ << "<text x=\"14\" y=\"" << num(kTop + 0.5 * (kHeight - kTop - kBottom))
         << "\" text-anchor=\"middle\" transform=\"rotate(-90 14 " << num(kTop + 0.5 * (kHeight - kTop - kBottom))
         << ")\">" << ylabel << "</text>\n";
  }

  void points(const std::vector<SummaryPoint>& pts, const char* fill, double r, double opacity) {
    out_ << "<g fill=\"" << fill << "\" fill-opacity=\"" << num(opacity) << "\">\n";
    for (const auto& p : pts)
      out_ << "<circle cx=\"" << num(px(p.y)) << "\" cy=\"" << num(py(p.f)) << "\" r=\"" << num(r) << "\"/>\n";
    out_ << "</g>\n";
  }

  void line(std::span<const double> xs, std::span<const double> ys, const char* stroke, const char* dash = nullptr) {
    out_ << "<polyline fill=\"none\" stroke=\"" << stroke << "\" stroke-width=\"1.5\"";
    if (dash) out_ << " stroke-dasharray=\"" << dash << "\"";
    out_ << " points=\"";
    for (std::size_t k = 0; k < xs.size(); ++k) out_ << (k ? " " : "") << num(px(xs[k])) << "," << num(py(ys[k]));
    out_ << "\"/>\n";
  }

  std::string finish() {
    out_ << "</svg>\n";
    return out_.str();
  }

 private:
  static void pad(double& lo, double& hi) {
    if (!(hi > lo)) {
      const double h = std::max(1e-12, 1e-3 * std::abs(lo));
      lo -= h;
      hi += h;
      return;
    }
    const double h = 0.05 * (hi - lo);
    lo -= h;
    hi += h;
  }

  double x0_, x1_, y0_, y1_;
  std::ostringstream out_;
};

}  // namespace

std::string summary_svg(const SummaryData& data, const BandSpec& band) {
  double ylo = std::numeric_limits<double>::infinity(), yhi = -ylo, flo = ylo, fhi = -ylo;
  auto extend = [&](const std::vector<SummaryPoint>& pts) {
    for (const auto& p : pts) {
      ylo = std::min(ylo, p.y);
      yhi = std::max(yhi, p.y);
      flo = std::min(flo, p.f);
      fhi = std::max(fhi, p.f);
    }
  };
  extend(data.points);
  extend(data.bootstrap_cloud);

  std::vector<double> ys, mean, upper;
  if (band.surrogate) {
    ylo = std::min(ylo, band.surrogate->y_lo);
    yhi = std::max(yhi, band.surrogate->y_hi);
    constexpr std::size_t n = 101;
    for (std::size_t k = 0; k < n; ++k) {
      const double y = ylo + (yhi - ylo) * static_cast<double>(k) / (n - 1);
      ys.push_back(y);
      mean.push_back(predict(*band.surrogate, y));
      flo = std::min(flo, mean.back());
      fhi = std::max(fhi, mean.back());
      if (band.surrogate->bounds_available()) {
        upper.push_back(upper_confidence(*band.surrogate, y, band.level));
        fhi = std::max(fhi, upper.back());
      }
    }
  }
  if (band.threshold) {
    flo = std::min(flo, *band.threshold);
    fhi = std::max(fhi, *band.threshold);
  }
  if (!std::isfinite(ylo)) ylo = yhi = flo = fhi = 0.0;

  Canvas c(ylo, yhi, flo, fhi);
  c.axes("active variable w^T x", "f");
  if (!data.bootstrap_cloud.empty()) c.points(data.bootstrap_cloud, "gray", 1.5, 0.25);
  c.points(data.points, "black", 3.0, 1.0);
  if (!ys.empty()) {
    c.line(ys, mean, "steelblue");
    if (!upper.empty()) c.line(ys, upper, "steelblue", "4,3");
  }
  if (band.threshold) {
    const double xs[2] = {ylo, yhi};
    const double th[2] = {*band.threshold, *band.threshold};
    c.line(xs, th, "firebrick", "2,2");
  }
  return c.finish();
}

std::string cdf_svg(const CdfEstimate& e) {
  const double lo = e.grid.empty() ? 0.0 : e.grid.front();
  const double hi = e.grid.empty() ? 1.0 : e.grid.back();
  Canvas c(lo, hi, 0.0, 1.0);
  c.axes("q", "P(f <= q)");
  c.line(e.grid, e.cdf, "steelblue");
  return c.finish();
}

}  // namespace asuq::reports
