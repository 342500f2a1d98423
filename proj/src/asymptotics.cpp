#include "casimir/asymptotics.hpp"

#include <cmath>
#include <limits>

#include "casimir/constants.hpp"
#include "casimir/error.hpp"
#include "casimir/specfun.hpp"

namespace casimir::asymptotics {

namespace {

using constants::pi;

void require_eps(double eps0, const char* what) {
  if (!(eps0 >= 1.0) || std::isnan(eps0)) throw Error(ErrorCode::domain, std::string(what) + " needs eps0 >= 1");
}

void require_geometry(double separation, double temperature) {
  if (!(separation > 0.0)) throw Error(ErrorCode::domain, "separation must be > 0");
  if (!(temperature >= 0.0)) throw Error(ErrorCode::invalid_temperature, "temperature must be >= 0");
}

double energy_prefactor(double a) { return constants::hbar * constants::c / (32.0 * pi * pi * a * a * a); }

// r0 with +inf mapped to the ideal-metal value 1.
double r0_of(double eps0) {
  if (std::isinf(eps0)) return 1.0;
  require_eps(eps0, "r0");
  return (eps0 - 1.0) / (eps0 + 1.0);
}

// atanh(z)/z, exact at z = 0.
double atanh_over_z(double z) {
  if (std::abs(z) < 1e-4) {
    const double z2 = z * z;
    return 1.0 + z2 / 3.0 + z2 * z2 / 5.0;
  }
  return std::atanh(z) / z;
}

// Direct evaluation of the dissimilar coefficient with the removable
// 1/(sqrt(e1) - sqrt(e2)) factor cancelled analytically:
//   atanh(z)/(s1 - s2) = [atanh(z)/z] sqrt(e1 + e2)/(p - e1 - e2).
double c4_general(double e1, double e2) {
  const double s1 = std::sqrt(e1);
  const double s2 = std::sqrt(e2);
  const double prod = e1 * e2;
  const double p = std::sqrt(prod);
  const double sum = e1 + e2;
  const double diff2 = (s1 - s2) * (s1 - s2);
  const double denom = p - sum;
  const double z = std::sqrt(sum) * (s1 - s2) / denom;

  double brace = -sum * sum * (2.0 * sum + p - prod);
  brace += prod * p * (5.0 * prod - 3.0 * sum + 1.0);
  brace += p * diff2 * (prod * p - p - sum);
  brace -= 3.0 * prod * prod * (e1 - 1.0) * (e2 - 1.0) * atanh_over_z(z) / denom;
  return (2.0 + brace / ((s1 + s2) * sum * sum)) / 720.0;
}

AsymptoticResult make(double correction, double leading, double coefficient, Validity v,
                      std::optional<double> zero_temperature_value) {
  AsymptoticResult r;
  r.correction = correction;
  r.value = correction + zero_temperature_value.value_or(0.0);
  r.leading_coefficient = leading;
  r.c4_or_k4 = coefficient;
  r.validity_note = v;
  return r;
}

// Shared low-tau form: F = E - pref [A tau^3 - B tau^4],
// P = P0 - pref/a B tau^4, S = (k_B/8 pi a^2)[3 A tau^2 - 4 B tau^3].
AsymptoticResult low_tau(double tau3, double tau4, double a, double temperature, Which which,
                         std::optional<double> zero_temperature_value) {
  const double tau = tau_of(a, temperature);
  const double pref = energy_prefactor(a);
  switch (which) {
    case Which::free_energy:
      return make(-pref * tau * tau * tau * (tau3 - tau4 * tau), -pref * tau3, tau4, Validity::low_tau,
                  zero_temperature_value);
    case Which::pressure:
      return make(-pref / a * tau4 * std::pow(tau, 4), -pref / a * tau4, tau4, Validity::low_tau,
                  zero_temperature_value);
    case Which::entropy: {
      const double s = constants::k_B / (8.0 * pi * a * a);
      return make(s * tau * tau * (3.0 * tau3 - 4.0 * tau4 * tau), 3.0 * s * tau3, tau4, Validity::low_tau, {});
    }
  }
  throw Error(ErrorCode::domain, "unknown quantity");
}

}  // namespace

std::string to_string(Validity v) { return v == Validity::low_tau ? "low_tau" : "high_tau"; }

double tau_of(double separation, double temperature) {
  return 4.0 * pi * constants::k_B * separation * temperature / (constants::hbar * constants::c);
}

double c4_equal(double eps0) {
  require_eps(eps0, "c4_equal");
  const double s = std::sqrt(eps0);
  return (s - 1.0) * (eps0 * eps0 + eps0 * s - 2.0) / 720.0;
}

double k4(double eps0) {
  require_eps(eps0, "k4");
  const double s = std::sqrt(eps0);
  return (1.0 - 2.0 * eps0 * s + eps0 * eps0 * s) / 360.0;
}

C4Evaluation c4_dissimilar_detail(double eps01, double eps02) {
  require_eps(eps01, "c4_dissimilar");
  require_eps(eps02, "c4_dissimilar");
  C4Evaluation out;
  const double general = c4_general(eps01, eps02);
  if (std::abs(std::sqrt(eps01) - std::sqrt(eps02)) < kC4SwitchDelta) {
    out.near_equal_branch = true;
    out.value = c4_equal(0.5 * (eps01 + eps02));
    out.error_bound = std::abs(general - out.value) + 64.0 * std::numeric_limits<double>::epsilon() * std::abs(out.value);
  } else {
    out.value = general;
    out.error_bound = 64.0 * std::numeric_limits<double>::epsilon() * std::abs(general);
  }
  return out;
}

double c4_dissimilar(double eps01, double eps02) { return c4_dissimilar_detail(eps01, eps02).value; }

double dissimilar_tau3_factor(double e1, double e2) {
  require_eps(e1, "tau^3 factor");
  require_eps(e2, "tau^3 factor");
  return (e1 + e2 + 2.0 * e1 * e2) / ((e1 + 1.0) * (e2 + 1.0)) * (e1 - 1.0) * (e2 - 1.0) / (e1 + e2);
}

AsymptoticResult lowT_dielectric(double eps01, double eps02, double separation, double temperature, Which which,
                                 std::optional<double> zero_temperature_value) {
  require_geometry(separation, temperature);
  const double tau3 = specfun::zeta3() * dissimilar_tau3_factor(eps01, eps02) / (8.0 * pi * pi);
  return low_tau(tau3, c4_dissimilar(eps01, eps02), separation, temperature, which, zero_temperature_value);
}

AsymptoticResult ideal_metal_lowT(double separation, double temperature, Which which,
                                  std::optional<double> zero_temperature_value) {
  require_geometry(separation, temperature);
  const double tau3 = specfun::zeta3() / (4.0 * pi * pi);
  return low_tau(tau3, 1.0 / 360.0, separation, temperature, which, zero_temperature_value);
}

AsymptoticResult ideal_metal_lowT_entropy(double separation, double temperature) {
  return ideal_metal_lowT(separation, temperature, Which::entropy);
}

AsymptoticResult lowT_metal_dielectric(double eps0, double separation, double temperature, Which which,
                                       std::optional<double> zero_temperature_value) {
  require_geometry(separation, temperature);
  require_eps(eps0, "lowT_metal_dielectric");
  const double tau3 = specfun::zeta3() * (eps0 - 1.0) * (eps0 - 1.0) / ((eps0 + 1.0) * 16.0 * pi * pi);
  return low_tau(tau3, k4(eps0), separation, temperature, which, zero_temperature_value);
}

AsymptoticResult highT(double eps01, double eps02, double separation, double temperature, Which which,
                       ConfigKind kind) {
  require_geometry(separation, temperature);
  const double x = kind == ConfigKind::dielectric_dielectric ? r0_of(eps01) * r0_of(eps02) : r0_of(eps02);
  const double li3 = specfun::polylog(3, x);
  const double a = separation;
  AsymptoticResult r;
  r.leading_coefficient = li3;
  r.validity_note = Validity::high_tau;
  switch (which) {
    case Which::free_energy: r.value = -constants::k_B * temperature / (16.0 * pi * a * a) * li3; break;
    case Which::pressure: r.value = -constants::k_B * temperature / (8.0 * pi * a * a * a) * li3; break;
    case Which::entropy: r.value = constants::k_B / (16.0 * pi * a * a) * li3; break;
  }
  r.correction = r.value;
  return r;
}

double dc_violation_entropy(double eps0, double separation, ConfigKind kind) {
  if (!(separation > 0.0)) throw Error(ErrorCode::domain, "separation must be > 0");
  const double r = r0_of(eps0);
  const double x = kind == ConfigKind::dielectric_dielectric ? r * r : r;
  return constants::k_B / (16.0 * pi * separation * separation) * (specfun::zeta3() - specfun::polylog(3, x));
}

std::vector<std::pair<double, double>> dc_r1_scaling_probe(const materials::DcAugmentedModel& model,
                                                           double separation,
                                                           const std::vector<double>& temperatures,
                                                           ConfigKind kind) {
  if (!(separation > 0.0)) throw Error(ErrorCode::domain, "separation must be > 0");
  const double eps0 = model.base.static_value();
  if (!(eps0 > 1.0)) throw Error(ErrorCode::domain, "dc probe needs a base permittivity eps0 > 1");
  const double r = r0_of(eps0);
  const double x = kind == ConfigKind::dielectric_dielectric ? r * r : r;
  const double li2 = specfun::polylog(2, x);
  const double pref = constants::k_B * li2 / (4.0 * pi * separation * separation * (eps0 * eps0 - 1.0));

  std::vector<std::pair<double, double>> out;
  out.reserve(temperatures.size());
  double previous = std::numeric_limits<double>::infinity();
  for (double t : temperatures) {
    if (!(t > 0.0) || !(t < previous)) {
      throw Error(ErrorCode::domain, "temperature sequence must be positive and strictly decreasing");
    }
    previous = t;
    out.emplace_back(t, pref * t * materials::beta(model, t) * std::log(tau_of(separation, t)));
  }
  return out;
}

}  // namespace casimir::asymptotics
