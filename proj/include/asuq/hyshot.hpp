#pragma once

// Input characterization for the HyShot II scramjet in the HEG shock
// tunnel: shot-data regression, stagnation-to-static conversion, inflow
// turbulence, nozzle/eddy-growth estimates, transition ranges, and the
// mapping from normalized UQ coordinates to solver boundary conditions.
//
// Everything is SI internally. Table units (MPa, MJ/kg, bar, mm) are
// converted where files are parsed.

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "asuq/param_space.hpp"
#include "json.hpp"

namespace asuq::hyshot {

struct ShotRecord {
  int id = 0;
  double p0 = 0.0;  // Pa
  double t0 = 0.0;  // K
  double h0 = 0.0;  // J/kg
  std::optional<double> p_h2;  // Pa, fueled shots only
  std::optional<double> phi;
  bool excluded = false;
};

// CSV columns: id,P0_bar,T0_K,H0_MJkg,PH2_bar,phi,excluded. Lines starting with '#' are comments.
std::vector<ShotRecord> parse_shots(const std::string& text);
std::vector<ShotRecord> load_shots(const std::filesystem::path& path);
std::vector<ShotRecord> default_shots();

// T0 = intercept + slope * H0, T0 in K and H0 in J/kg.
struct StagnationRelation {
  double intercept = 0.0;
  double slope = 0.0;

  double t0(double h0) const noexcept { return intercept + slope * h0; }
  double h0(double t0) const noexcept { return (t0 - intercept) / slope; }
};

inline constexpr StagnationRelation kReferenceT0H0{508.1386, 6.8718e-4};

/// Ordinary least squares of T0 on H0 over the shots not flagged as
/// excluded (or over all of them with include_excluded).
StagnationRelation fit_t0_h0(std::span<const ShotRecord> shots, bool include_excluded = false);

// Freestream-to-reservoir ratios for the nozzle; assumed valid at every run condition.
struct FlowRatios {
  double p_ratio = 1.16e-4;  // P / P0
  double t_ratio = 0.0978;   // T / T0
  double u_coeff = 1.332;    // U_mag / sqrt(H0)
};

struct StaticState {
  double p = 0.0;      // Pa
  double t = 0.0;      // K
  double u_mag = 0.0;  // m/s
  double u_x = 0.0;
  double u_y = 0.0;
};

/// Positive angle of attack pitches the oncoming flow toward the vehicle:
/// U_x = U cos(alpha), U_y = -U sin(alpha).
StaticState stagnation_to_static(double p0, double t0, double h0, double alpha_deg, const FlowRatios& ratios = {});

inline constexpr double kCmu = 0.09;

struct TurbulenceInflow {
  double k = 0.0;      // m^2/s^2
  double omega = 0.0;  // 1/s
  bool laminar = false;  // zero intensity
};

// k = 1.5 (U I)^2, omega = sqrt(k) / (C_mu^{1/4} L).
TurbulenceInflow turbulence_inflow(double u_mag, double intensity, double length_scale);

// Isentropic area-Mach relation A/A*.
double area_mach_ratio(double mach, double gamma = 1.4);

// Supersonic root of area_mach_ratio(M) = ratio, by bisection on [1, 50].
double supersonic_mach(double area_ratio, double gamma = 1.4);

// Eddy length growth through the nozzle, (P0/P * T/T0)^{1/3}.
double eddy_growth_ratio(const FlowRatios& ratios = {});

struct NozzleEstimate {
  double area_ratio = 0.0;
  double throat_diameter = 0.0;  // m
  double growth_ratio = 0.0;
  double length_scale = 0.0;     // m; half the throat diameter grown through the nozzle
};

NozzleEstimate nominal_length_scale(double test_section_diameter = 0.610, double mach = 7.4, double gamma = 1.4,
                                    const FlowRatios& ratios = {});

struct TransitionSpec {
  double x_t0 = 0.0;  // m
  double varphi = 0.2;
  double criterion_constant = 200.0;  // critical Re_theta / M_e
};

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

// x_t0 (1 -/+ 2 varphi); throws DomainError unless 0 <= varphi < 0.5 and x_t0 > 0.
Interval transition_range(const TransitionSpec& spec);

enum class CombustionRegime { AsDesigned, RegimeBoundary };
inline constexpr double kRegimeBoundaryPhi = 0.39;

struct EquivalenceRatio {
  double phi = 0.0;
  CombustionRegime regime = CombustionRegime::AsDesigned;
};

// phi = 8 mdot_H2 / mdot_O2 for hydrogen in air.
EquivalenceRatio equivalence_ratio(double mdot_h2, double mdot_o2);
std::string_view to_string(CombustionRegime r);

// Converts a table value to SI. Throws SchemaError for unknown units.
double to_si(double value, std::string_view units);

struct InflowCondition {
  // Stagnation inputs after denormalization, SI.
  double p0 = 0.0;
  double h0 = 0.0;
  double t0 = 0.0;
  double intensity = 0.0;
  double length_scale = 0.0;
  // Boundary condition handed to the solver.
  double p = 0.0;
  double t = 0.0;
  double u_mag = 0.0;
  double u_x = 0.0;
  double u_y = 0.0;
  double alpha = 0.0;  // deg
  double k = 0.0;
  double omega = 0.0;
  double x_t_ramp = 0.0;
  double x_t_cowl = 0.0;
  std::vector<std::string> warnings;
};

struct ScenarioConfig {
  FlowRatios ratios;
  StagnationRelation t0_h0 = kReferenceT0H0;
  TransitionSpec ramp{0.145};
  TransitionSpec cowl{0.050};
};

// Parameter names build_inflow expects in the space.
inline constexpr std::string_view kParameterNames[] = {
    "stagnation_pressure", "stagnation_enthalpy", "angle_of_attack",  "turbulence_intensity",
    "turbulence_length_scale", "ramp_transition", "cowl_transition"};

/// Normalized point -> solver inflow. Throws SchemaError when the space
/// lacks one of kParameterNames or uses an unknown unit.
InflowCondition build_inflow(std::span<const double> x, const ParameterSpace& space, const ScenarioConfig& config = {});

// {"P_Pa", "T_K", "Ux_ms", "Uy_ms", "k_m2s2", "omega_1s", "xt_ramp_m", "xt_cowl_m"}
nlohmann::ordered_json inflow_params(const InflowCondition& c);

}  // namespace asuq::hyshot
