#pragma once

#include <cmath>
#include <optional>

#include "casimir/materials.hpp"

namespace casimir::reflection {

/// Point of the dimensionless integration domain: zeta = tau * l, y >= zeta.
struct DimensionlessPoint {
  double zeta = 0.0;
  double y = 0.0;
};

/// Cancellation-free forms of the TM/TE coefficients, with
/// s = sqrt(y^2 + zeta^2 (eps - 1)):
///   r_tm = (eps y - s)/(eps y + s) = (eps - 1)((eps + 1) y^2 - zeta^2) / (eps y + s)^2
///   r_te = (s - y)/(s + y)         = zeta^2 (eps - 1) / (s + y)^2
template <class Real>
Real tm_coefficient(Real eps, Real zeta, Real y) {
  if (y == Real(0)) return (eps - 1) / (eps + 1);  // zeta = y = 0 corner
  const Real s = std::sqrt(y * y + zeta * zeta * (eps - 1));
  const Real d = eps * y + s;
  return (eps - 1) * ((eps + 1) * y * y - zeta * zeta) / (d * d);
}

template <class Real>
Real te_coefficient(Real eps, Real zeta, Real y) {
  if (zeta == Real(0)) return Real(0);
  const Real s = std::sqrt(y * y + zeta * zeta * (eps - 1));
  const Real d = s + y;
  return zeta * zeta * (eps - 1) / (d * d);
}

/// TE coefficient of the plasma model at zero frequency, with
/// Omega = 2 a omega_p / c: Omega^2 / (sqrt(y^2 + Omega^2) + y)^2.
template <class Real>
Real plasma_te_zero(Real omega_scaled, Real y) {
  const Real d = std::sqrt(y * y + omega_scaled * omega_scaled) + y;
  return omega_scaled * omega_scaled / (d * d);
}

/// Throws Error(domain) for eps < 1, non-finite eps or an invalid point.
double r_tm(double eps, const DimensionlessPoint& p);
double r_te(double eps, const DimensionlessPoint& p);

/// Overloads taking a possibly divergent permittivity (std::nullopt); a
/// divergent value must go through zero_freq_pair instead and is rejected.
double r_tm(std::optional<double> eps, const DimensionlessPoint& p);
double r_te(std::optional<double> eps, const DimensionlessPoint& p);

/// Zero-frequency coefficients. r_perp is constant except for the plasma
/// model, whose TE coefficient depends on y through plasma_scale = Omega.
struct ZeroFreqPair {
  double r_par = 0.0;
  double r_perp_constant = 0.0;
  double plasma_scale = 0.0;  // Omega = 2 a omega_p / c; 0 when unused

  bool y_dependent() const { return plasma_scale > 0.0; }
  double r_perp(double y) const {
    return y_dependent() ? plasma_te_zero(plasma_scale, y) : r_perp_constant;
  }
};

/// Zero-frequency rules by model class:
///   ideal metal (1, 1); Drude (1, 0); plasma (1, r_perp(y)); finite eps0
///   (r0, 0) with r0 = (eps0 - 1)/(eps0 + 1); dc-augmented (1, 0).
/// The plasma model needs the separation (metres) to scale k_perp; a missing
/// separation is a domain error for that model only.
ZeroFreqPair zero_freq_pair(const materials::PermittivityModel& model, std::optional<double> separation = {});

/// (eps0 - 1)/(eps0 + 1).
double r0(double eps0);

}  // namespace casimir::reflection
