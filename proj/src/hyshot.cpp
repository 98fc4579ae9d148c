#include "asuq/hyshot.hpp"

#include <cmath>
#include <numbers>

#include "asuq/errors.hpp"
#include "asuq/io.hpp"

namespace asuq::hyshot {

std::vector<ShotRecord> parse_shots(const std::string& text) {
  std::vector<ShotRecord> shots;
  bool have_header = false;
  std::size_t line_no = 0;
  for (auto raw : io::split(text, '\n')) {
    ++line_no;
    const auto line = io::trim(raw);
    if (line.empty() || line.front() == '#') continue;
    const auto fields = io::split(line, ',');
    if (!have_header) {
      static constexpr std::string_view expected[] = {"id", "P0_bar", "T0_K", "H0_MJkg", "PH2_bar", "phi", "excluded"};
      if (fields.size() != 7) throw ParseError("shots header must have 7 columns", line_no);
      for (std::size_t i = 0; i < 7; ++i)
        if (io::trim(fields[i]) != expected[i])
          throw ParseError("shots header column " + std::to_string(i + 1) + " must be " + std::string(expected[i]), line_no);
      have_header = true;
      continue;
    }
    if (fields.size() != 7) throw ParseError("shot row must have 7 columns", line_no);
    auto number = [&](std::size_t i) {
      const auto v = io::parse_double(fields[i]);
      if (!v || !std::isfinite(*v)) throw ParseError("bad number in column " + std::to_string(i + 1), line_no);
      return *v;
    };
    auto optional_number = [&](std::size_t i) -> std::optional<double> {
      if (io::trim(fields[i]).empty()) return std::nullopt;
      return number(i);
    };
    ShotRecord s;
    const double id = number(0);
    if (id != std::floor(id)) throw ParseError("shot id must be an integer", line_no);
    s.id = static_cast<int>(id);
    s.p0 = number(1) * 1e5;
    s.t0 = number(2);
    s.h0 = number(3) * 1e6;
    if (auto ph2 = optional_number(4)) s.p_h2 = *ph2 * 1e5;
    s.phi = optional_number(5);
    const auto ex = io::trim(fields[6]);
    if (ex != "0" && ex != "1") throw ParseError("excluded flag must be 0 or 1", line_no);
    s.excluded = ex == "1";
    if (!(s.p0 > 0.0 && s.t0 > 0.0 && s.h0 > 0.0)) throw ParseError("P0, T0, H0 must be positive", line_no);
    if (s.phi && !s.p_h2) throw ParseError("a shot with phi must carry its fuel plenum pressure", line_no);
    shots.push_back(s);
  }
  if (!have_header) throw ParseError("shots file has no header");
  return shots;
}

std::vector<ShotRecord> load_shots(const std::filesystem::path& path) { return parse_shots(io::read_file(path)); }

std::vector<ShotRecord> default_shots() { return load_shots(data_dir() / "hyshot_shots.csv"); }

StagnationRelation fit_t0_h0(std::span<const ShotRecord> shots, bool include_excluded) {
  double n = 0.0, hbar = 0.0, tbar = 0.0;
  for (const auto& s : shots) {
    if (s.excluded && !include_excluded) continue;
    n += 1.0;
    hbar += s.h0;
    tbar += s.t0;
  }
  if (n < 2.0) throw RankError("T0-H0 regression needs at least 2 usable shots", static_cast<std::size_t>(n));
  hbar /= n;
  tbar /= n;
  double shh = 0.0, sht = 0.0;
  for (const auto& s : shots) {
    if (s.excluded && !include_excluded) continue;
    shh += (s.h0 - hbar) * (s.h0 - hbar);
    sht += (s.h0 - hbar) * (s.t0 - tbar);
  }
  if (shh == 0.0) throw RankError("T0-H0 regression: all usable shots share one enthalpy", 1);
  StagnationRelation rel;
  rel.slope = sht / shh;
  rel.intercept = tbar - rel.slope * hbar;
  return rel;
}

StaticState stagnation_to_static(double p0, double t0, double h0, double alpha_deg, const FlowRatios& ratios) {
  if (!(p0 > 0.0 && t0 > 0.0 && h0 > 0.0)) throw DomainError("stagnation conditions must be positive");
  if (!(ratios.p_ratio > 0.0 && ratios.t_ratio > 0.0 && ratios.u_coeff > 0.0))
    throw DomainError("flow ratios must be positive");
  StaticState s;
  s.p = ratios.p_ratio * p0;
  s.t = ratios.t_ratio * t0;
  s.u_mag = ratios.u_coeff * std::sqrt(h0);
  const double a = alpha_deg * std::numbers::pi / 180.0;
  s.u_x = s.u_mag * std::cos(a);
  s.u_y = -s.u_mag * std::sin(a);
  return s;
}

TurbulenceInflow turbulence_inflow(double u_mag, double intensity, double length_scale) {
  if (!(u_mag > 0.0) || intensity < 0.0 || !(length_scale > 0.0))
    throw DomainError("turbulence inflow needs U > 0, I >= 0, L > 0");
  TurbulenceInflow t;
  const double ui = u_mag * intensity;
  t.k = 1.5 * ui * ui;
  t.omega = std::sqrt(t.k) / (std::pow(kCmu, 0.25) * length_scale);
  t.laminar = intensity == 0.0;
  return t;
}

double area_mach_ratio(double mach, double gamma) {
  if (!(mach > 0.0) || !(gamma > 1.0)) throw DomainError("area-Mach relation needs M > 0 and gamma > 1");
  const double base = (2.0 / (gamma + 1.0)) * (1.0 + 0.5 * (gamma - 1.0) * mach * mach);
  return std::sqrt(std::pow(base, (gamma + 1.0) / (gamma - 1.0))) / mach;
}

double supersonic_mach(double area_ratio, double gamma) {
  if (!(area_ratio >= 1.0)) throw DomainError("area ratio must be >= 1");
  double lo = 1.0, hi = 50.0;
  if (area_mach_ratio(hi, gamma) < area_ratio) throw DomainError("area ratio beyond the Mach 50 bracket");
  for (int it = 0; it < 200 && hi - lo > 1e-14 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (area_mach_ratio(mid, gamma) < area_ratio)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

double eddy_growth_ratio(const FlowRatios& ratios) {
  if (!(ratios.p_ratio > 0.0 && ratios.t_ratio > 0.0)) throw DomainError("flow ratios must be positive");
  return std::cbrt(ratios.t_ratio / ratios.p_ratio);
}

NozzleEstimate nominal_length_scale(double test_section_diameter, double mach, double gamma, const FlowRatios& ratios) {
  NozzleEstimate e;
  e.area_ratio = area_mach_ratio(mach, gamma);
  e.throat_diameter = test_section_diameter / std::sqrt(e.area_ratio);
  e.growth_ratio = eddy_growth_ratio(ratios);
  e.length_scale = 0.5 * e.throat_diameter * e.growth_ratio;
  return e;
}

Interval transition_range(const TransitionSpec& spec) {
  if (!(spec.x_t0 > 0.0)) throw DomainError("nominal transition location must be positive");
  if (!(spec.varphi >= 0.0 && spec.varphi < 0.5)) throw DomainError("transition perturbation must lie in [0, 0.5)");
  return {spec.x_t0 * (1.0 - 2.0 * spec.varphi), spec.x_t0 * (1.0 + 2.0 * spec.varphi)};
}

EquivalenceRatio equivalence_ratio(double mdot_h2, double mdot_o2) {
  if (!(mdot_o2 > 0.0)) throw DomainError("oxygen mass flow must be positive");
  if (mdot_h2 < 0.0) throw DomainError("hydrogen mass flow must be non-negative");
  EquivalenceRatio e;
  e.phi = 8.0 * mdot_h2 / mdot_o2;
  e.regime = e.phi >= kRegimeBoundaryPhi ? CombustionRegime::RegimeBoundary : CombustionRegime::AsDesigned;
  return e;
}

std::string_view to_string(CombustionRegime r) {
  return r == CombustionRegime::AsDesigned ? "as-designed" : "regime-boundary";
}

double to_si(double value, std::string_view units) {
  struct Unit {
    std::string_view name;
    double factor;
  };
  static constexpr Unit table[] = {
      {"Pa", 1.0},     {"kPa", 1e3},   {"MPa", 1e6},   {"bar", 1e5},  {"J/kg", 1.0}, {"kJ/kg", 1e3},
      {"MJ/kg", 1e6},  {"K", 1.0},     {"m", 1.0},     {"mm", 1e-3},  {"deg", 1.0},  {"-", 1.0},
      {"", 1.0},       {"%", 1e-2},
  };
  for (const auto& u : table)
    if (u.name == units) return value * u.factor;
  throw SchemaError("unknown unit '" + std::string(units) + "'");
}

InflowCondition build_inflow(std::span<const double> x, const ParameterSpace& space, const ScenarioConfig& config) {
  std::size_t idx[7];
  for (std::size_t k = 0; k < 7; ++k) {
    const auto i = space.index_of(kParameterNames[k]);
    if (!i) throw SchemaError("parameter space lacks '" + std::string(kParameterNames[k]) + "'");
    idx[k] = *i;
  }
  const auto phys = denormalize(x, space);
  auto si = [&](std::size_t k) { return to_si(phys[idx[k]], space[idx[k]].units); };

  InflowCondition c;
  c.p0 = si(0);
  c.h0 = si(1);
  c.alpha = si(2);
  c.intensity = si(3);
  c.length_scale = si(4);
  c.x_t_ramp = si(5);
  c.x_t_cowl = si(6);
  c.t0 = config.t0_h0.t0(c.h0);

  const auto st = stagnation_to_static(c.p0, c.t0, c.h0, c.alpha, config.ratios);
  c.p = st.p;
  c.t = st.t;
  c.u_mag = st.u_mag;
  c.u_x = st.u_x;
  c.u_y = st.u_y;
  const auto turb = turbulence_inflow(c.u_mag, c.intensity, c.length_scale);
  c.k = turb.k;
  c.omega = turb.omega;
  if (turb.laminar) c.warnings.push_back("zero turbulence intensity: laminar inflow");

  auto check_transition = [&](std::size_t k, const TransitionSpec& spec, const char* label) {
    const auto range = transition_range(spec);
    const auto& p = space[idx[k]];
    const double lo = to_si(p.min, p.units), hi = to_si(p.max, p.units);
    if (std::abs(lo - range.lo) > 1e-9 * range.hi || std::abs(hi - range.hi) > 1e-9 * range.hi)
      c.warnings.push_back(std::string(label) + " range in the space differs from x_t0 (1 -/+ 2 varphi)");
  };
  check_transition(5, config.ramp, "ramp transition");
  check_transition(6, config.cowl, "cowl transition");
  for (std::size_t i = 0; i < x.size(); ++i)
    if (x[i] < -1.0 || x[i] > 1.0)
      c.warnings.push_back("'" + space[i].name + "' lies outside its range (extrapolation)");
  return c;
}

nlohmann::ordered_json inflow_params(const InflowCondition& c) {
  return {{"P_Pa", c.p},       {"T_K", c.t},           {"Ux_ms", c.u_x},           {"Uy_ms", c.u_y},
          {"k_m2s2", c.k},     {"omega_1s", c.omega},  {"xt_ramp_m", c.x_t_ramp},  {"xt_cowl_m", c.x_t_cowl}};
}

}  // namespace asuq::hyshot
