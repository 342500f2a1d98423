#include "casimir/materials.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "casimir/constants.hpp"
#include "casimir/error.hpp"
#include "casimir/quadrature.hpp"

namespace casimir::materials {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

[[noreturn]] void invalid(const std::string& what) { throw Error(ErrorCode::invalid_model, what); }

void validate_oscillator(const OscillatorModel& m) {
  if (m.strengths.size() != m.frequencies.size()) {
    invalid("oscillator strengths and frequencies differ in length");
  }
  for (std::size_t j = 0; j < m.strengths.size(); ++j) {
    if (!(m.strengths[j] > 0.0 && std::isfinite(m.strengths[j]))) invalid("oscillator strength must be > 0");
    if (!(m.frequencies[j] > 0.0)) invalid("oscillator frequency must be > 0");
  }
}

double oscillator_eps(const OscillatorModel& m, double xi) {
  double eps = 1.0;
  for (std::size_t j = 0; j < m.strengths.size(); ++j) {
    const double ratio = xi / m.frequencies[j];  // 0 for an infinite frequency
    eps += m.strengths[j] / (1.0 + ratio * ratio);
  }
  return eps;
}

double require_temperature(std::optional<double> temperature, const char* model) {
  if (!temperature || !(*temperature >= 0.0)) {
    throw Error(ErrorCode::domain, std::string(model) + " permittivity needs a temperature >= 0");
  }
  return *temperature;
}

// int_0^inf eps_edge e^{rate_sign * p s} omega(s)^2 / (omega(s)^2 + xi^2) ds for
// the tail beyond a grid edge, omega(s) = omega_edge e^{direction s}.
double tail_integral(double omega_edge, double eps_edge, double exponent, double xi, int direction) {
  if (eps_edge == 0.0) return 0.0;
  const double decay = (direction < 0) ? exponent + (xi > 0.0 ? 2.0 : 0.0) : -exponent;
  if (!(decay > 0.0)) {
    throw Error(ErrorCode::static_divergence, "tabulated spectrum tail does not converge");
  }
  auto integrand = [&](double s) {
    const double omega = omega_edge * std::exp(direction * s);
    const double ratio = (xi > 0.0) ? xi / omega : 0.0;
    return eps_edge * std::exp(direction * exponent * s) / (1.0 + ratio * ratio);
  };
  const double span = 4.0 / decay;
  const std::array<double, 5> breaks = {0.0, 0.25 * span, 0.5 * span, span, 2.0 * span};
  quad::Options opt;
  opt.rel_tol = 1e-13;
  opt.extend_tail = true;
  opt.max_tail_panels = 40;
  return quad::integrate_scalar(integrand, breaks, opt).value[0];
}

}  // namespace

double OscillatorModel::static_value() const { return oscillator_eps(*this, 0.0); }

double RelaxationProfile::at(double temperature) const {
  if (table.empty()) return constant;
  if (temperature <= table.front().first) return table.front().second;
  if (temperature >= table.back().first) return table.back().second;
  const auto upper = std::lower_bound(table.begin(), table.end(), temperature,
                                      [](const auto& row, double t) { return row.first < t; });
  const auto lower = upper - 1;
  const double w = (temperature - lower->first) / (upper->first - lower->first);
  return lower->second + w * (upper->second - lower->second);
}

double ActivatedConductivity::at(double temperature) const {
  if (!(temperature > 0.0)) return 0.0;
  if (gap_b == 0.0) return sigma_ref;
  return sigma_ref * std::exp(-gap_b / temperature + gap_b / reference_temperature);
}

double TailModel::effective_exponent(double fallback) const {
  switch (kind) {
    case Kind::constant: return 0.0;
    case Kind::power_law: return exponent;
    case Kind::none: return fallback;
  }
  return fallback;
}

void OpticalDataTable::validate() const {
  if (omega.size() != eps2.size()) invalid("optical table columns differ in length");
  if (omega.size() < 8) invalid("optical table needs at least 8 grid points");
  for (std::size_t i = 0; i < omega.size(); ++i) {
    if (!(omega[i] > 0.0 && std::isfinite(omega[i]))) invalid("optical table frequencies must be > 0");
    if (!(eps2[i] >= 0.0 && std::isfinite(eps2[i]))) invalid("optical table eps'' must be >= 0");
    if (i > 0 && !(omega[i] > omega[i - 1])) invalid("optical table frequencies must increase strictly");
  }
  if (low_tail.kind == TailModel::Kind::power_law && !(low_tail.exponent > -2.0)) {
    invalid("low-frequency tail exponent must exceed -2");
  }
  if (high_tail.kind == TailModel::Kind::constant ||
      (high_tail.kind == TailModel::Kind::power_law && !(high_tail.exponent < 0.0))) {
    invalid("high-frequency tail must decay (negative exponent)");
  }
}

ModelClass classify(const PermittivityModel& model) {
  return std::visit(overloaded{
                        [](const OscillatorModel&) { return ModelClass::oscillator; },
                        [](const DrudeModel&) { return ModelClass::drude; },
                        [](const PlasmaModel&) { return ModelClass::plasma; },
                        [](const IdealMetal&) { return ModelClass::ideal_metal; },
                        [](const DcAugmentedModel&) { return ModelClass::dc_augmented; },
                        [](const OpticalModel&) { return ModelClass::optical_table; },
                    },
                    model);
}

std::string to_string(ModelClass kind) {
  switch (kind) {
    case ModelClass::oscillator: return "oscillator";
    case ModelClass::drude: return "drude";
    case ModelClass::plasma: return "plasma";
    case ModelClass::ideal_metal: return "ideal_metal";
    case ModelClass::dc_augmented: return "dc_augmented";
    case ModelClass::optical_table: return "optical_table";
  }
  return "unknown";
}

void validate(const PermittivityModel& model) {
  std::visit(overloaded{
                 [](const OscillatorModel& m) { validate_oscillator(m); },
                 [](const DrudeModel& m) {
                   if (!(m.plasma_frequency > 0.0)) invalid("Drude plasma frequency must be > 0");
                   if (!(m.relaxation.constant >= 0.0)) invalid("Drude relaxation must be >= 0");
                   double previous = -std::numeric_limits<double>::infinity();
                   for (const auto& [t, nu] : m.relaxation.table) {
                     if (!(t > previous)) invalid("relaxation table temperatures must increase");
                     if (!(nu >= 0.0)) invalid("relaxation table values must be >= 0");
                     previous = t;
                   }
                 },
                 [](const PlasmaModel& m) {
                   if (!(m.plasma_frequency > 0.0)) invalid("plasma frequency must be > 0");
                 },
                 [](const IdealMetal&) {},
                 [](const DcAugmentedModel& m) {
                   validate_oscillator(m.base);
                   if (!(m.sigma0.sigma_ref > 0.0)) invalid("dc conductivity must be > 0");
                   if (!(m.sigma0.reference_temperature > 0.0)) invalid("reference temperature must be > 0");
                   if (!(m.sigma0.gap_b >= 0.0)) invalid("activation parameter b must be >= 0");
                 },
                 [](const OpticalModel& m) { m.table.validate(); },
             },
             model);
}

bool has_finite_static(const PermittivityModel& model) { return static_eps(model).has_value(); }

bool is_temperature_dependent(const PermittivityModel& model) {
  if (std::holds_alternative<DcAugmentedModel>(model)) return true;
  if (const auto* drude = std::get_if<DrudeModel>(&model)) return !drude->relaxation.table.empty();
  return false;
}

double eval_eps(const PermittivityModel& model, double xi, std::optional<double> temperature) {
  if (!(xi >= 0.0)) throw Error(ErrorCode::domain, "imaginary frequency must be >= 0");
  return std::visit(
      overloaded{
          [&](const OscillatorModel& m) { return oscillator_eps(m, xi); },
          [&](const DrudeModel& m) {
            if (xi == 0.0) throw Error(ErrorCode::static_divergence, "Drude permittivity diverges at xi = 0");
            const double nu = m.relaxation.at(require_temperature(temperature, "Drude"));
            return 1.0 + m.plasma_frequency * m.plasma_frequency / (xi * (xi + nu));
          },
          [&](const PlasmaModel& m) {
            if (xi == 0.0) throw Error(ErrorCode::static_divergence, "plasma permittivity diverges at xi = 0");
            const double ratio = m.plasma_frequency / xi;
            return 1.0 + ratio * ratio;
          },
          [&](const IdealMetal&) -> double {
            throw Error(ErrorCode::model_not_pointwise, "ideal metal has no pointwise permittivity");
          },
          [&](const DcAugmentedModel& m) {
            if (xi == 0.0) {
              throw Error(ErrorCode::static_divergence, "dc-augmented permittivity diverges at xi = 0");
            }
            const double t = require_temperature(temperature, "dc-augmented");
            return oscillator_eps(m.base, xi) + 4.0 * constants::pi * m.sigma0.at(t) / xi;
          },
          [&](const OpticalModel& m) { return kk_to_imaginary_axis(m.table, xi); },
      },
      model);
}

double matsubara_eps(const PermittivityModel& model, long l, double temperature) {
  if (l < 1) throw Error(ErrorCode::domain, "matsubara_eps needs l >= 1; l = 0 uses the zero-frequency rules");
  if (!(temperature > 0.0)) throw Error(ErrorCode::invalid_temperature, "temperature must be > 0");
  const double xi = 2.0 * constants::pi * constants::k_B * temperature * static_cast<double>(l) / constants::hbar;
  if (const auto* dc = std::get_if<DcAugmentedModel>(&model)) {
    return oscillator_eps(dc->base, xi) + beta(*dc, temperature) / static_cast<double>(l);
  }
  return eval_eps(model, xi, temperature);
}

std::optional<double> static_eps(const PermittivityModel& model) {
  if (const auto* osc = std::get_if<OscillatorModel>(&model)) return osc->static_value();
  if (const auto* optical = std::get_if<OpticalModel>(&model)) {
    try {
      return kk_to_imaginary_axis(optical->table, 0.0);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::static_divergence) return std::nullopt;
      throw;
    }
  }
  return std::nullopt;
}

double kk_to_imaginary_axis(const OpticalDataTable& table, double xi) {
  table.validate();
  if (!(xi >= 0.0)) throw Error(ErrorCode::domain, "imaginary frequency must be >= 0");

  auto kernel = [xi](double omega, double eps2) {
    const double ratio = xi / omega;
    return eps2 / (1.0 + ratio * ratio);
  };

  quad::NeumaierSum grid;
  double abs_grid = 0.0;
  for (std::size_t i = 0; i + 1 < table.omega.size(); ++i) {
    const double du = std::log(table.omega[i + 1] / table.omega[i]);
    const double piece =
        0.5 * du * (kernel(table.omega[i], table.eps2[i]) + kernel(table.omega[i + 1], table.eps2[i + 1]));
    grid.add(piece);
    abs_grid += piece;
  }

  constexpr double default_low = 1.0;
  constexpr double default_high = -3.0;
  const double low = tail_integral(table.omega.front(), table.eps2.front(),
                                   table.low_tail.effective_exponent(default_low), xi, -1);
  const double high = tail_integral(table.omega.back(), table.eps2.back(),
                                    table.high_tail.effective_exponent(default_high), xi, +1);
  const double total = abs_grid + low + high;

  double integral = grid.value();
  if (table.low_tail.kind == TailModel::Kind::none) {
    if (low > 0.01 * total) {
      throw Error(ErrorCode::tail_underspecified, "low-frequency tail carries more than 1% of the KK integral");
    }
  } else {
    integral += low;
  }
  if (table.high_tail.kind == TailModel::Kind::none) {
    if (high > 0.01 * total) {
      throw Error(ErrorCode::tail_underspecified, "high-frequency tail carries more than 1% of the KK integral");
    }
  } else {
    integral += high;
  }
  return 1.0 + (2.0 / constants::pi) * integral;
}

double beta(const DcAugmentedModel& model, double temperature) {
  if (!(temperature > 0.0)) throw Error(ErrorCode::domain, "beta(T) requires T > 0");
  return 2.0 * constants::hbar * model.sigma0.at(temperature) / (constants::k_B * temperature);
}

std::optional<PermittivityModel> preset(const std::string& name) {
  // Oscillator frequencies are representative UV absorption frequencies;
  // only the static values are fixed by the material definitions.
  const OscillatorModel si{{10.67}, {6.6e15}};
  const OscillatorModel sio2{{2.84}, {2.0e16}};
  if (name == "Si-static") return si;
  if (name == "SiO2-static") return sio2;
  if (name == "ideal-metal") return IdealMetal{};
  if (name == "vacuum") return OscillatorModel{};
  // High-resistivity (1000 Ohm cm) Si: sigma = 8.99e8 s^-1; b from the 1.12 eV gap.
  if (name == "Si-dc") return DcAugmentedModel{si, {8.99e8, 300.0, 6.5e3}};
  // sigma chosen so that beta(300 K) ~ 1e-12.
  if (name == "SiO2-dc") return DcAugmentedModel{sio2, {19.6, 300.0, 5.2e4}};
  if (name == "Au-plasma") return PlasmaModel{1.37e16};
  if (name == "Au-drude") return DrudeModel{1.37e16, {5.32e13, {}}};
  return std::nullopt;
}

std::vector<std::string> preset_names() {
  return {"Si-static", "SiO2-static", "ideal-metal", "vacuum", "Si-dc", "SiO2-dc", "Au-plasma", "Au-drude"};
}

}  // namespace casimir::materials
