#pragma once

#include "casimir/materials.hpp"

namespace casimir::lifshitz {

struct PlateConfiguration {
  materials::PermittivityModel material_1;
  materials::PermittivityModel material_2;
  double separation = 0.0;   // metres
  double temperature = 0.0;  // kelvin

  /// tau = 4 pi k_B a T / (hbar c).
  double tau() const;
  /// Throws Error(domain) for a <= 0 and Error(invalid_temperature) for T < 0.
  void validate() const;
};

struct NumericalSettings {
  double y_quad_rel_tol = 1e-12;
  double matsubara_rel_tol = 1e-9;
  long l_max_cap = 100'000;
  double diff_step_fraction = 1e-2;

  /// Tolerances near the double-precision floor, for thermal corrections at
  /// small tau where F and E(a) agree to ~1e-11.
  static NumericalSettings precise();
  void validate() const;
};

struct Diagnostics {
  long terms_used = 0;            // Matsubara terms summed (0 for zero-T integrals)
  double truncation_error = 0.0;  // estimated omitted Matsubara tail, SI units
  double quadrature_error = 0.0;  // summed quadrature error estimates, SI units
  // Non-smooth part of the error (truncation + rounding): what survives in
  // differences of nearby evaluations. Used as the finite-difference floor.
  double noise = 0.0;
  int halvings = 0;               // step halvings used by a derivative
};

struct Quantity {
  double value = 0.0;
  double error = 0.0;  // total estimated error, SI units
  Diagnostics diagnostics;
};

struct ThermalQuantities {
  Quantity free_energy;  // J/m^2
  Quantity pressure;     // Pa, negative = attraction
  Quantity entropy;      // J/(K m^2)
  bool attractive = true;  // F <= 0 observed
};

/// Free energy and pressure from a single Matsubara sum (both need the same
/// reflection coefficients). T = 0, or tau < 1e-8, routes to the zero-T
/// integrals.
struct EnergyPressure {
  Quantity free_energy;
  Quantity pressure;
};
EnergyPressure energy_and_pressure(const PlateConfiguration& cfg, const NumericalSettings& ns = {});

Quantity free_energy(const PlateConfiguration& cfg, const NumericalSettings& ns = {});
Quantity pressure(const PlateConfiguration& cfg, const NumericalSettings& ns = {});

/// S = -dF/dT by Richardson-extrapolated central differences. Throws
/// Error(derivative_unstable) when successive extrapolations still disagree
/// after 6 halvings of the step.
Quantity entropy(const PlateConfiguration& cfg, const NumericalSettings& ns = {});

ThermalQuantities compute(const PlateConfiguration& cfg, const NumericalSettings& ns = {});

/// Zero-temperature energy and pressure (the Matsubara sum replaced by an
/// integral over zeta). Temperature-dependent materials are evaluated at
/// cfg.temperature. Throws Error(quadrature_failure) if the outer integral
/// misses its tolerance.
EnergyPressure zero_temperature(const PlateConfiguration& cfg, const NumericalSettings& ns = {});
Quantity zero_temperature_energy(const PlateConfiguration& cfg, const NumericalSettings& ns = {});
Quantity zero_temperature_pressure(const PlateConfiguration& cfg, const NumericalSettings& ns = {});

/// Thermal corrections to energy and pressure. `abel_plana` subtracts the
/// zero-temperature integral with materials held at T; `from_zero_temperature`
/// subtracts it with materials at T = 0. They coincide for
/// temperature-independent materials.
struct ThermalCorrection {
  EnergyPressure abel_plana;
  EnergyPressure from_zero_temperature;
  bool temperature_dependent_materials = false;
};
ThermalCorrection thermal_correction(const PlateConfiguration& cfg, const NumericalSettings& ns = {});

/// xi_l = 2 pi k_B T l / hbar.
double matsubara_frequency(long l, double temperature);

}  // namespace casimir::lifshitz
