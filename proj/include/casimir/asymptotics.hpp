#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "casimir/materials.hpp"

namespace casimir::asymptotics {

enum class Which { free_energy, pressure, entropy };
enum class ConfigKind { dielectric_dielectric, metal_dielectric };
enum class Validity { low_tau, high_tau };

std::string to_string(Validity v);

/// Closed-form expansion value.
///
/// `value` is the full quantity (J/m^2, Pa or J/(K m^2)). For the low-tau
/// free energy and pressure it is the thermal correction unless a
/// zero-temperature value was supplied, in which case that value is added.
/// `correction` is always the temperature-dependent part alone.
/// `leading_coefficient` multiplies the leading power of tau (tau^3 for the
/// free energy, tau^4 for the pressure, tau^2 for the entropy at low tau;
/// the Li3 factor at high tau) in SI units.
struct AsymptoticResult {
  double value = 0.0;
  double correction = 0.0;
  double leading_coefficient = 0.0;
  double c4_or_k4 = 0.0;
  Validity validity_note = Validity::low_tau;
};

/// (sqrt(e) - 1)(e^2 + e^{3/2} - 2) / 720. Throws Error(domain) for e < 1.
double c4_equal(double eps0);

/// (1 - 2 e^{3/2} + e^{5/2}) / 360. Throws Error(domain) for e < 1.
double k4(double eps0);

/// Tau^4 coefficient for two dissimilar dielectrics, with the bound on the
/// error of the near-equal branch.
struct C4Evaluation {
  double value = 0.0;
  double error_bound = 0.0;
  bool near_equal_branch = false;
};

/// |sqrt(e1) - sqrt(e2)| below which c4_dissimilar falls back to c4_equal at
/// the mean permittivity.
inline constexpr double kC4SwitchDelta = 1e-5;

C4Evaluation c4_dissimilar_detail(double eps01, double eps02);
double c4_dissimilar(double eps01, double eps02);

/// Tau^3 factor G(e1, e2) of the dissimilar-dielectric free energy; reduces
/// to (e - 1)^2/(e + 1) for equal permittivities.
double dissimilar_tau3_factor(double eps01, double eps02);

/// Dissimilar (or similar) dielectrics at low tau.
AsymptoticResult lowT_dielectric(double eps01, double eps02, double separation, double temperature, Which which,
                                 std::optional<double> zero_temperature_value = {});

/// Ideal-metal plates at low tau. The free energy and pressure follow from
/// integrating the two-term entropy expansion.
AsymptoticResult ideal_metal_lowT(double separation, double temperature, Which which,
                                  std::optional<double> zero_temperature_value = {});
AsymptoticResult ideal_metal_lowT_entropy(double separation, double temperature);

/// Ideal metal facing a dielectric with static permittivity eps0.
AsymptoticResult lowT_metal_dielectric(double eps0, double separation, double temperature, Which which,
                                       std::optional<double> zero_temperature_value = {});

/// Zero-frequency (classical) limit: X = r0(1) r0(2) for two dielectrics and
/// X = r0(2) for metal-dielectric, where `eps01` is then ignored (plate 1 is
/// the metal). eps = +inf denotes an ideal metal (r0 = 1).
AsymptoticResult highT(double eps01, double eps02, double separation, double temperature, Which which,
                       ConfigKind kind);

/// Residual entropy at T -> 0 when a dc conductivity is added:
/// (k_B/16 pi a^2)[zeta(3) - Li3(X)], X = r0^2 or r0.
double dc_violation_entropy(double eps0, double separation, ConfigKind kind);

/// Leading logarithmic estimate of the beta-linear remainder,
///   R1 = k_B Li2(X) T beta(T) ln(tau) / (4 pi a^2 (eps0^2 - 1)),
/// with X = r0^2 (dielectric pair) or r0 (metal-dielectric), for a strictly
/// decreasing positive temperature sequence.
std::vector<std::pair<double, double>> dc_r1_scaling_probe(const materials::DcAugmentedModel& model,
                                                           double separation,
                                                           const std::vector<double>& temperatures,
                                                           ConfigKind kind = ConfigKind::dielectric_dielectric);

/// tau = 4 pi k_B a T / (hbar c).
double tau_of(double separation, double temperature);

}  // namespace casimir::asymptotics
