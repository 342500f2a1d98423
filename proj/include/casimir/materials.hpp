#pragma once

#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace casimir::materials {

/// Oscillator (Ninham-Parsegian) representation along the imaginary axis:
///   eps(i xi) = 1 + sum_j C_j / (1 + xi^2 / omega_j^2).
/// An infinite omega_j makes that term frequency independent, which is how a
/// constant permittivity is modelled.
struct OscillatorModel {
  std::vector<double> strengths;    // C_j, dimensionless
  std::vector<double> frequencies;  // omega_j, rad/s

  double static_value() const;
};

/// Relaxation parameter nu(T) of the Drude model: a constant unless a
/// (T, nu) table is supplied, in which case it is linearly interpolated and
/// clamped at the table ends.
struct RelaxationProfile {
  double constant = 0.0;                          // rad/s
  std::vector<std::pair<double, double>> table;  // (kelvin, rad/s), T increasing

  double at(double temperature) const;
};

struct DrudeModel {
  double plasma_frequency = 0.0;  // rad/s
  RelaxationProfile relaxation;
};

struct PlasmaModel {
  double plasma_frequency = 0.0;  // rad/s
};

/// Perfect reflector. Has no pointwise permittivity; handled entirely by the
/// reflection rules.
struct IdealMetal {};

/// Activated dc conductivity sigma0(T) = sigma_ref * exp(-b/T + b/T_ref).
/// Gaussian convention: sigma0 is in rad/s so that 4 pi sigma0 / xi is
/// dimensionless.
struct ActivatedConductivity {
  double sigma_ref = 0.0;          // rad/s at T_ref
  double reference_temperature = 300.0;
  double gap_b = 0.0;              // kelvin

  double at(double temperature) const;
};

/// Oscillator model with an added dc-conductivity term 4 pi sigma0 / xi.
struct DcAugmentedModel {
  OscillatorModel base;
  ActivatedConductivity sigma0;
};

/// Low/high frequency extrapolation of a tabulated eps''.
struct TailModel {
  enum class Kind { none, constant, power_law };
  Kind kind = Kind::none;
  double exponent = 0.0;  // eps'' ~ omega^exponent beyond the table

  static TailModel none() { return {Kind::none, 0.0}; }
  static TailModel constant() { return {Kind::constant, 0.0}; }
  static TailModel power_law(double p) { return {Kind::power_law, p}; }
  /// Exponent actually used (0 for constant, the default for none).
  double effective_exponent(double fallback) const;
};

/// Tabulated absorptive spectrum eps''(omega) on a strictly increasing grid.
struct OpticalDataTable {
  std::vector<double> omega;  // rad/s
  std::vector<double> eps2;
  TailModel low_tail = TailModel::power_law(1.0);
  TailModel high_tail = TailModel::power_law(-3.0);

  void validate() const;
};

struct OpticalModel {
  OpticalDataTable table;
};

using PermittivityModel =
    std::variant<OscillatorModel, DrudeModel, PlasmaModel, IdealMetal, DcAugmentedModel, OpticalModel>;

enum class ModelClass { oscillator, drude, plasma, ideal_metal, dc_augmented, optical_table };

ModelClass classify(const PermittivityModel& model);
std::string to_string(ModelClass kind);

/// Throws Error(invalid_model) when an invariant of the model is violated.
void validate(const PermittivityModel& model);

/// True when eps(0) is finite (oscillator and tabulated models).
bool has_finite_static(const PermittivityModel& model);

/// True when the response changes with temperature (tabulated nu(T), dc term).
bool is_temperature_dependent(const PermittivityModel& model);

/// eps(i xi) for xi >= 0. A temperature is required for models whose
/// parameters depend on it.
///
/// Throws Error(static_divergence) at xi = 0 for Drude, plasma and
/// dc-augmented models and Error(model_not_pointwise) for IdealMetal.
double eval_eps(const PermittivityModel& model, double xi, std::optional<double> temperature = {});

/// eps at the l-th Matsubara frequency, l >= 1. For dc-augmented models the
/// conductivity enters as beta(T)/l.
double matsubara_eps(const PermittivityModel& model, long l, double temperature);

/// Static permittivity; std::nullopt marks a divergent (metallic) response.
std::optional<double> static_eps(const PermittivityModel& model);

/// eps(i xi) = 1 + (2/pi) int_0^inf omega eps''(omega) / (omega^2 + xi^2) d omega,
/// trapezoid in ln omega on the grid plus the configured tails. xi = 0 gives
/// the static value. Throws Error(tail_underspecified) when a tail set to
/// `none` would carry more than 1% of the integral.
double kk_to_imaginary_axis(const OpticalDataTable& table, double xi);

/// beta(T) = 2 hbar sigma0(T) / (k_B T).
double beta(const DcAugmentedModel& model, double temperature);

/// Built-in materials: "Si-static", "SiO2-static", "ideal-metal", "vacuum",
/// "Si-dc", "SiO2-dc", "Au-plasma", "Au-drude".
std::optional<PermittivityModel> preset(const std::string& name);
std::vector<std::string> preset_names();

}  // namespace casimir::materials
