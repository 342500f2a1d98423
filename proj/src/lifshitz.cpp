#include "casimir/lifshitz.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <vector>

#include "casimir/constants.hpp"
#include "casimir/error.hpp"
#include "casimir/quadrature.hpp"
#include "casimir/reflection.hpp"

namespace casimir::lifshitz {

namespace {

// The inner y-integrals run in extended precision: thermal corrections at
// small tau are differences of O(1) quantities that agree to ~1e-12.
using Real = long double;
constexpr Real kRealEps = std::numeric_limits<Real>::epsilon();

using materials::PermittivityModel;

// ---------------------------------------------------------------------------
// Reflection data of one plate at one frequency.

struct Side {
  enum class Kind { dielectric, perfect, zero_frequency };
  Kind kind = Kind::dielectric;
  Real eps = 1;
  reflection::ZeroFreqPair pair;
};

struct Coefficients {
  Real tm;
  Real te;
};

inline Coefficients coefficients(const Side& s, Real zeta, Real y) {
  switch (s.kind) {
    case Side::Kind::perfect: return {1, 1};
    case Side::Kind::zero_frequency:
      return {static_cast<Real>(s.pair.r_par),
              s.pair.y_dependent() ? reflection::plasma_te_zero(static_cast<Real>(s.pair.plasma_scale), y)
                                   : static_cast<Real>(s.pair.r_perp_constant)};
    case Side::Kind::dielectric:
      return {reflection::tm_coefficient(s.eps, zeta, y), reflection::te_coefficient(s.eps, zeta, y)};
  }
  return {0, 0};
}

Side zero_frequency_side(const PermittivityModel& m, double separation) {
  Side s;
  s.kind = Side::Kind::zero_frequency;
  s.pair = reflection::zero_freq_pair(m, separation);
  return s;
}

Side side_for_eps(const PermittivityModel& m, double eps) {
  Side s;
  if (std::holds_alternative<materials::IdealMetal>(m)) {
    s.kind = Side::Kind::perfect;
  } else {
    s.eps = eps;
  }
  return s;
}

Side matsubara_side(const PermittivityModel& m, long l, double temperature) {
  if (std::holds_alternative<materials::IdealMetal>(m)) return side_for_eps(m, 0.0);
  return side_for_eps(m, materials::matsubara_eps(m, l, temperature));
}

Side continuous_side(const PermittivityModel& m, double zeta, double separation, std::optional<double> temperature) {
  if (std::holds_alternative<materials::IdealMetal>(m)) return side_for_eps(m, 0.0);
  const double xi = zeta * constants::c / (2.0 * separation);
  return side_for_eps(m, materials::eval_eps(m, xi, temperature));
}

// ---------------------------------------------------------------------------
// Inner integral over y in [zeta, inf) of
//   F-part: y [ln(1 - R_tm e^-y) + ln(1 - R_te e^-y)]
//   P-part: y^2 [R_tm e^-y/(1 - R_tm e^-y) + R_te e^-y/(1 - R_te e^-y)]
// with R = r1 r2, integrated in t = y - zeta.

struct Integrand {
  Real zeta;
  Side s1;
  Side s2;

  std::array<Real, 2> operator()(Real t) const {
    const Real y = zeta + t;
    const Coefficients c1 = coefficients(s1, zeta, y);
    const Coefficients c2 = coefficients(s2, zeta, y);
    const Real decay = std::exp(-y);
    const Real x_tm = c1.tm * c2.tm * decay;
    const Real x_te = c1.te * c2.te * decay;
    return {y * (std::log1p(-x_tm) + std::log1p(-x_te)), y * y * (x_tm / (1 - x_tm) + x_te / (1 - x_te))};
  }
};

struct PanelSum {
  std::array<Real, 2> value{};
  std::array<Real, 2> error{};
  std::array<Real, 2> abs_value{};

  void add(const quad::detail::Panel<2, Real>& p) {
    for (int k = 0; k < 2; ++k) {
      value[k] += p.value[k];
      error[k] += p.error[k];
      abs_value[k] += p.abs_value[k];
    }
  }
  void add(const PanelSum& p) {
    for (int k = 0; k < 2; ++k) {
      value[k] += p.value[k];
      error[k] += p.error[k];
      abs_value[k] += p.abs_value[k];
    }
  }
};

// Fixed panel layout in t: geometric grading from ~zeta/32 up to 1 resolves
// the structure of the reflection coefficients at t ~ zeta, then coarse
// panels follow the e^-y decay.
constexpr std::array<Real, 7> kOuterBreaks = {2, 4, 8, 14, 22, 32, 44};
constexpr int kMinExponent = -24;

int grading_start(Real zeta) {
  if (zeta <= 0) return kMinExponent;
  const int k = static_cast<int>(std::floor(std::log2(zeta))) - 4;
  return std::clamp(k, kMinExponent, 0);
}

struct TermValue {
  std::array<Real, 2> value{};
  std::array<Real, 2> error{};
  std::array<Real, 2> abs_value{};
};

TermValue integrate_term(Integrand f, double rel_tol) {
  constexpr int kMaxLevel = 3;
  constexpr int kMaxTailPanels = 24;
  constexpr Real kTailWidth = 12;

  std::array<Real, 40> breaks{};
  int n = 0;
  breaks[n++] = 0;
  for (int k = grading_start(f.zeta); k <= 0; ++k) breaks[n++] = std::ldexp(Real(1), k);
  for (Real b : kOuterBreaks) breaks[n++] = b;

  TermValue out;
  for (int level = 0; level <= kMaxLevel; ++level) {
    const int split = 1 << level;
    PanelSum total;
    auto add_panel = [&](Real a, Real b) {
      PanelSum last;
      const Real w = (b - a) / split;
      for (int i = 0; i < split; ++i) {
        last.add(quad::detail::gk15<2, Real>(f, a + i * w, i + 1 == split ? b : a + (i + 1) * w));
      }
      total.add(last);
      return last;
    };
    PanelSum last;
    for (int i = 0; i + 1 < n; ++i) last = add_panel(breaks[i], breaks[i + 1]);
    Real edge = breaks[n - 1];
    for (int extra = 0; extra < kMaxTailPanels; ++extra) {
      const bool significant =
          std::abs(last.value[0]) > 1e-3L * rel_tol * std::abs(total.value[0]) ||
          std::abs(last.value[1]) > 1e-3L * rel_tol * std::abs(total.value[1]);
      if (!significant) break;
      last = add_panel(edge, edge + kTailWidth);
      edge += kTailWidth;
    }
    out.value = total.value;
    out.error = total.error;
    out.abs_value = total.abs_value;
    const bool converged = out.error[0] <= rel_tol * std::abs(out.value[0]) &&
                           out.error[1] <= rel_tol * std::abs(out.value[1]);
    if (converged) break;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Matsubara sum.

struct SumResult {
  Real f_sum = 0;  // dimensionless sums, l = 0 weighted by 1/2
  Real p_sum = 0;
  Real f_quad_error = 0;
  Real p_quad_error = 0;
  Real f_trunc = 0;
  Real p_trunc = 0;
  Real f_abs = 0;
  Real p_abs = 0;
  long terms = 0;
};

// Geometric estimate of the omitted tail after `term`, or +inf while the
// terms are not yet decaying.
Real tail_estimate(Real term, Real previous, Real floor_ratio) {
  term = std::abs(term);
  previous = std::abs(previous);
  if (term == 0) return 0;
  Real q = previous > 0 ? term / previous : Real(1);
  q = std::max(q, floor_ratio);
  if (q >= 1) return std::numeric_limits<Real>::infinity();
  return term * q / (1 - q);
}

SumResult matsubara_sum(const PlateConfiguration& cfg, const NumericalSettings& ns) {
  const double tau = cfg.tau();
  const double a = cfg.separation;
  const double temperature = cfg.temperature;

  SumResult r;
  quad::BasicNeumaierSum<Real> f_acc, p_acc;
  auto accumulate = [&](const TermValue& v, Real weight) {
    f_acc.add(weight * v.value[0]);
    p_acc.add(weight * v.value[1]);
    r.f_quad_error += weight * v.error[0];
    r.p_quad_error += weight * v.error[1];
    r.f_abs += weight * v.abs_value[0];
    r.p_abs += weight * v.abs_value[1];
  };

  const Integrand zero{0, zero_frequency_side(cfg.material_1, a), zero_frequency_side(cfg.material_2, a)};
  accumulate(integrate_term(zero, ns.y_quad_rel_tol), Real(0.5));
  r.terms = 1;

  const Real floor_ratio = std::exp(-static_cast<Real>(tau));
  std::array<Real, 2> previous{0, 0};
  int quiet = 0;
  bool converged = false;
  for (long l = 1; l <= ns.l_max_cap; ++l) {
    const Integrand f{static_cast<Real>(tau) * l, matsubara_side(cfg.material_1, l, temperature),
                      matsubara_side(cfg.material_2, l, temperature)};
    const TermValue v = integrate_term(f, ns.y_quad_rel_tol);
    accumulate(v, 1);
    r.terms = l + 1;

    const Real f_tail = tail_estimate(v.value[0], previous[0], floor_ratio);
    const Real p_tail = tail_estimate(v.value[1], previous[1], floor_ratio);
    previous = v.value;
    const bool small = f_tail <= ns.matsubara_rel_tol * std::abs(f_acc.value()) &&
                       p_tail <= ns.matsubara_rel_tol * std::abs(p_acc.value());
    quiet = small ? quiet + 1 : 0;
    if (quiet >= 3) {
      r.f_trunc = f_tail;
      r.p_trunc = p_tail;
      converged = true;
      break;
    }
  }
  if (!converged) {
    throw Error(ErrorCode::convergence_failure,
                "Matsubara sum did not reach tolerance within l_max_cap = " + std::to_string(ns.l_max_cap));
  }
  r.f_sum = f_acc.value();
  r.p_sum = p_acc.value();
  return r;
}

Real energy_prefactor(double a) {
  const Real al = a;
  return static_cast<Real>(constants::hbar) * static_cast<Real>(constants::c) /
         (32 * static_cast<Real>(constants::pi) * static_cast<Real>(constants::pi) * al * al * al);
}

// One physical quantity in SI units, kept in extended precision until the
// public boundary.
struct Raw {
  Real value = 0;
  Real quad = 0;   // smooth (systematic) error estimate
  Real trunc = 0;  // omitted Matsubara tail
  Real rounding = 0;
  long terms = 0;

  Real noise() const { return trunc + rounding; }

  Quantity quantity() const {
    Quantity q;
    q.value = static_cast<double>(value);
    q.error = static_cast<double>(quad + trunc + rounding) + std::numeric_limits<double>::epsilon() * std::abs(q.value);
    q.diagnostics.terms_used = terms;
    q.diagnostics.quadrature_error = static_cast<double>(quad);
    q.diagnostics.truncation_error = static_cast<double>(trunc);
    q.diagnostics.noise = static_cast<double>(noise()) + std::numeric_limits<double>::epsilon() * std::abs(q.value);
    return q;
  }
};

struct RawPair {
  Raw f;
  Raw p;

  EnergyPressure quantities() const { return {f.quantity(), p.quantity()}; }
};

RawPair sum_raw(const PlateConfiguration& cfg, const NumericalSettings& ns) {
  const SumResult s = matsubara_sum(cfg, ns);
  const Real ef = energy_prefactor(cfg.separation) * static_cast<Real>(cfg.tau());
  const Real ep = ef / static_cast<Real>(cfg.separation);
  auto make = [&](Real scale, Real sum, Real quad_err, Real trunc, Real abs_sum) {
    Raw r;
    r.value = scale * sum;
    r.quad = scale * quad_err;
    r.trunc = scale * trunc;
    r.rounding = 64 * kRealEps * scale * abs_sum;
    r.terms = s.terms;
    return r;
  };
  RawPair out;
  out.f = make(ef, s.f_sum, s.f_quad_error, s.f_trunc, s.f_abs);
  out.p = make(ep, -s.p_sum, s.p_quad_error, s.p_trunc, s.p_abs);
  return out;
}

RawPair zero_raw(const PlateConfiguration& cfg, const NumericalSettings& ns) {
  const double a = cfg.separation;
  const std::optional<double> temperature = cfg.temperature;
  const double inner_tol = ns.y_quad_rel_tol;

  auto g = [&](Real zeta) {
    const Integrand f{zeta, continuous_side(cfg.material_1, static_cast<double>(zeta), a, temperature),
                      continuous_side(cfg.material_2, static_cast<double>(zeta), a, temperature)};
    return integrate_term(f, inner_tol).value;
  };

  std::vector<double> breaks{0.0};
  for (int k = -20; k <= 0; ++k) breaks.push_back(std::ldexp(1.0, k));
  for (double b : {2.0, 4.0, 8.0, 16.0, 24.0, 32.0, 40.0, 48.0}) breaks.push_back(b);

  quad::Options opt;
  opt.rel_tol = ns.y_quad_rel_tol;
  opt.extend_tail = true;
  opt.max_panels = 2000;
  const auto res = quad::integrate<2, Real>(g, breaks, opt);
  if (!res.converged) {
    throw Error(ErrorCode::quadrature_failure,
                "zero-temperature integral reached relative error " +
                    std::to_string(static_cast<double>(res.error[0] / std::max(std::abs(res.value[0]), Real(1e-300)))));
  }

  const Real ef = energy_prefactor(a);
  const Real ep = ef / static_cast<Real>(a);
  auto make = [&](Real scale, int k, Real sign) {
    Raw r;
    r.value = sign * scale * res.value[k];
    r.quad = scale * (res.error[k] + inner_tol * res.abs_value[k]);
    r.rounding = 64 * kRealEps * scale * res.abs_value[k];
    return r;
  };
  return {make(ef, 0, 1), make(ep, 1, -1)};
}

bool routes_to_zero_temperature(const PlateConfiguration& cfg) {
  return cfg.temperature == 0.0 || cfg.tau() < 1e-8;
}

RawPair raw_energy_pressure(const PlateConfiguration& cfg, const NumericalSettings& ns) {
  return routes_to_zero_temperature(cfg) ? zero_raw(cfg, ns) : sum_raw(cfg, ns);
}

Raw difference(const Raw& x, const Raw& y) {
  Raw r;
  r.value = x.value - y.value;
  r.quad = x.quad + y.quad;
  r.trunc = x.trunc + y.trunc;
  r.rounding = x.rounding + y.rounding;
  r.terms = x.terms;
  return r;
}

}  // namespace

// ---------------------------------------------------------------------------

double PlateConfiguration::tau() const {
  return 4.0 * constants::pi * constants::k_B * separation * temperature / (constants::hbar * constants::c);
}

void PlateConfiguration::validate() const {
  if (!(separation > 0.0) || !std::isfinite(separation)) throw Error(ErrorCode::domain, "separation must be > 0");
  if (!(temperature >= 0.0) || !std::isfinite(temperature)) {
    throw Error(ErrorCode::invalid_temperature, "temperature must be >= 0");
  }
  materials::validate(material_1);
  materials::validate(material_2);
}

NumericalSettings NumericalSettings::precise() {
  NumericalSettings ns;
  ns.y_quad_rel_tol = 1e-15;
  ns.matsubara_rel_tol = 1e-18;
  ns.l_max_cap = 1'000'000;
  return ns;
}

void NumericalSettings::validate() const {
  auto in_range = [](double x) { return x > 0.0 && x <= 1e-4; };
  if (!in_range(y_quad_rel_tol) || !in_range(matsubara_rel_tol)) {
    throw Error(ErrorCode::domain, "tolerances must lie in (0, 1e-4]");
  }
  if (l_max_cap < 10) throw Error(ErrorCode::domain, "l_max_cap must be >= 10");
  if (!(diff_step_fraction > 0.0 && diff_step_fraction < 0.5)) {
    throw Error(ErrorCode::domain, "diff_step_fraction must lie in (0, 0.5)");
  }
}

double matsubara_frequency(long l, double temperature) {
  if (!(temperature > 0.0)) throw Error(ErrorCode::invalid_temperature, "temperature must be > 0");
  if (l < 0) throw Error(ErrorCode::domain, "Matsubara index must be >= 0");
  return 2.0 * constants::pi * constants::k_B * temperature * static_cast<double>(l) / constants::hbar;
}

EnergyPressure zero_temperature(const PlateConfiguration& cfg, const NumericalSettings& ns) {
  cfg.validate();
  ns.validate();
  return zero_raw(cfg, ns).quantities();
}

Quantity zero_temperature_energy(const PlateConfiguration& cfg, const NumericalSettings& ns) {
  return zero_temperature(cfg, ns).free_energy;
}

Quantity zero_temperature_pressure(const PlateConfiguration& cfg, const NumericalSettings& ns) {
  return zero_temperature(cfg, ns).pressure;
}

EnergyPressure energy_and_pressure(const PlateConfiguration& cfg, const NumericalSettings& ns) {
  cfg.validate();
  ns.validate();
  return raw_energy_pressure(cfg, ns).quantities();
}

Quantity free_energy(const PlateConfiguration& cfg, const NumericalSettings& ns) {
  return energy_and_pressure(cfg, ns).free_energy;
}

Quantity pressure(const PlateConfiguration& cfg, const NumericalSettings& ns) {
  return energy_and_pressure(cfg, ns).pressure;
}

Quantity entropy(const PlateConfiguration& cfg, const NumericalSettings& ns) {
  cfg.validate();
  ns.validate();
  if (!(cfg.temperature > 0.0)) throw Error(ErrorCode::invalid_temperature, "entropy needs T > 0");

  long terms = 0;
  // -dF/dT by a central difference; `noise` receives the non-smooth error of
  // the two free energies divided by the step.
  auto central = [&](Real h, Real& noise) {
    PlateConfiguration up = cfg, down = cfg;
    up.temperature = static_cast<double>(cfg.temperature + h);
    down.temperature = static_cast<double>(cfg.temperature - h);
    const Real width = static_cast<Real>(up.temperature) - static_cast<Real>(down.temperature);
    const Raw fu = sum_raw(up, ns).f;
    const Raw fd = sum_raw(down, ns).f;
    terms = std::max({terms, fu.terms, fd.terms});
    noise = (fu.noise() + fd.noise()) / width;
    return -(fu.value - fd.value) / width;
  };

  constexpr int kMaxHalvings = 6;
  Real h = static_cast<Real>(ns.diff_step_fraction) * cfg.temperature;
  Real noise_prev = 0;
  Real d_prev = central(h, noise_prev);
  Real r_prev = 0;
  Real best_gap = std::numeric_limits<Real>::infinity();
  for (int halving = 1; halving <= kMaxHalvings; ++halving) {
    h /= 2;
    Real noise = 0;
    const Real d = central(h, noise);
    const Real r = (4 * d - d_prev) / 3;
    const Real floor = (4 * noise + noise_prev) / 3;
    if (halving >= 2) {
      const Real gap = std::abs(r - r_prev);
      best_gap = std::min(best_gap, gap);
      if (gap <= std::max(static_cast<Real>(ns.matsubara_rel_tol) * std::abs(r), 2 * floor)) {
        Quantity q;
        q.value = static_cast<double>(r);
        q.error = static_cast<double>(gap + floor);
        q.diagnostics.terms_used = terms;
        q.diagnostics.noise = static_cast<double>(floor);
        q.diagnostics.halvings = halving;
        return q;
      }
    }
    d_prev = d;
    noise_prev = noise;
    r_prev = r;
  }
  throw Error(ErrorCode::derivative_unstable,
              "Richardson estimates of dF/dT still differ by " + std::to_string(static_cast<double>(best_gap)) +
                  " after 6 halvings");
}

ThermalQuantities compute(const PlateConfiguration& cfg, const NumericalSettings& ns) {
  ThermalQuantities out;
  const EnergyPressure ep = energy_and_pressure(cfg, ns);
  out.free_energy = ep.free_energy;
  out.pressure = ep.pressure;
  if (cfg.temperature > 0.0) {
    out.entropy = entropy(cfg, ns);
  } else {
    // A finite-difference derivative is undefined at the boundary T = 0.
    out.entropy.value = std::numeric_limits<double>::quiet_NaN();
    out.entropy.error = std::numeric_limits<double>::quiet_NaN();
  }
  out.attractive = out.free_energy.value <= 0.0;
  return out;
}

ThermalCorrection thermal_correction(const PlateConfiguration& cfg, const NumericalSettings& ns) {
  cfg.validate();
  ns.validate();
  if (!(cfg.temperature > 0.0)) throw Error(ErrorCode::invalid_temperature, "thermal correction needs T > 0");

  ThermalCorrection out;
  out.temperature_dependent_materials =
      materials::is_temperature_dependent(cfg.material_1) || materials::is_temperature_dependent(cfg.material_2);

  const RawPair finite_t = raw_energy_pressure(cfg, ns);
  const RawPair frozen = zero_raw(cfg, ns);
  RawPair cold = frozen;
  if (out.temperature_dependent_materials) {
    PlateConfiguration at_zero = cfg;
    at_zero.temperature = 0.0;
    cold = zero_raw(at_zero, ns);
  }
  out.abel_plana = {difference(finite_t.f, frozen.f).quantity(), difference(finite_t.p, frozen.p).quantity()};
  out.from_zero_temperature = {difference(finite_t.f, cold.f).quantity(), difference(finite_t.p, cold.p).quantity()};
  return out;
}

}  // namespace casimir::lifshitz
