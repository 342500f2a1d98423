#include <doctest.h>

#include <cmath>
#include <limits>

#include "casimir/asymptotics.hpp"
#include "casimir/constants.hpp"
#include "casimir/error.hpp"
#include "casimir/lifshitz.hpp"
#include "casimir/specfun.hpp"

using namespace casimir;
using namespace casimir::lifshitz;
using constants::pi;

namespace {

materials::PermittivityModel mat(const char* name) { return *materials::preset(name); }

constexpr double hbar_c = constants::hbar * constants::c;

template <class F>
ErrorCode code_of(F f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error thrown");
  return ErrorCode::io;
}

}  // namespace

TEST_SUITE("lifshitz") {

TEST_CASE("matsubara frequencies") {
  CHECK(matsubara_frequency(0, 300.0) == 0.0);
  CHECK(matsubara_frequency(1, 300.0) == doctest::Approx(2.4677902551530605e14).epsilon(1e-14));
  CHECK(matsubara_frequency(2, 150.0) == doctest::Approx(matsubara_frequency(1, 300.0)).epsilon(1e-15));
  CHECK(PlateConfiguration{mat("vacuum"), mat("vacuum"), 4e-7, 300.0}.tau() ==
        doctest::Approx(0.65853297887915793803).epsilon(1e-14));
}

TEST_CASE("settings and configuration validation") {
  NumericalSettings ns;
  CHECK_NOTHROW(ns.validate());
  ns.matsubara_rel_tol = 1e-3;
  CHECK_THROWS_AS(ns.validate(), Error);
  ns = {};
  ns.l_max_cap = 5;
  CHECK_THROWS_AS(ns.validate(), Error);
  CHECK(code_of([] { PlateConfiguration{mat("vacuum"), mat("vacuum"), 0.0, 1.0}.validate(); }) == ErrorCode::domain);
  CHECK(code_of([] { free_energy({mat("vacuum"), mat("vacuum"), 1e-6, -1.0}); }) == ErrorCode::invalid_temperature);
  CHECK(code_of([] { entropy({mat("Si-static"), mat("Si-static"), 1e-6, 0.0}); }) ==
        ErrorCode::invalid_temperature);
  CHECK(code_of([] { thermal_correction({mat("Si-static"), mat("Si-static"), 1e-6, 0.0}); }) ==
        ErrorCode::invalid_temperature);
}

TEST_CASE("vacuum plates give zero") {
  const PlateConfiguration cfg{mat("vacuum"), mat("vacuum"), 1e-6, 300.0};
  const auto q = compute(cfg);
  CHECK(q.free_energy.value == 0.0);
  CHECK(q.pressure.value == 0.0);
  CHECK(q.entropy.value == 0.0);
  CHECK(zero_temperature_energy(cfg).value == 0.0);
  const auto tc = thermal_correction(cfg);
  CHECK(tc.abel_plana.free_energy.value == 0.0);
}

TEST_CASE("ideal metals at zero temperature") {
  for (double a : {1e-7, 1e-6}) {
    const PlateConfiguration cfg{mat("ideal-metal"), mat("ideal-metal"), a, 0.0};
    const auto z = zero_temperature(cfg);
    CHECK(z.free_energy.value == doctest::Approx(-pi * pi * hbar_c / (720 * a * a * a)).epsilon(1e-12));
    CHECK(z.pressure.value == doctest::Approx(-pi * pi * hbar_c / (240 * a * a * a * a)).epsilon(1e-12));
    // T = 0 routes the Matsubara entry points to the same integrals.
    CHECK(free_energy(cfg).value == z.free_energy.value);
    CHECK(pressure(cfg).value == z.pressure.value);
  }
}

TEST_CASE("classical limit of ideal metals") {
  const double a = 5e-6;
  const double t = 1200.0;
  const auto f = free_energy({mat("ideal-metal"), mat("ideal-metal"), a, t});
  const double classical = -constants::k_B * t * specfun::zeta3() / (16 * pi * a * a);
  CHECK(f.value == doctest::Approx(classical).epsilon(1e-6));
}

TEST_CASE("Si/SiO2 against an independent quadrature") {
  // scipy adaptive quadrature on the textbook coefficients (tests/oracles).
  const auto f = free_energy({mat("Si-static"), mat("SiO2-static"), 4e-7, 300.0});
  CHECK(f.value == doctest::Approx(-1.3150768866953516e-09).epsilon(1e-9));
  const auto g = free_energy({mat("Si-static"), mat("Si-static"), 1e-6, 77.0}, NumericalSettings::precise());
  CHECK(g.value == doctest::Approx(-1.3109665171020598e-10).epsilon(1e-11));
}

TEST_CASE("exchange symmetry") {
  const auto f12 = energy_and_pressure({mat("Si-static"), mat("SiO2-static"), 3e-7, 250.0});
  const auto f21 = energy_and_pressure({mat("SiO2-static"), mat("Si-static"), 3e-7, 250.0});
  CHECK(f12.free_energy.value == doctest::Approx(f21.free_energy.value).epsilon(1e-15));
  CHECK(f12.pressure.value == doctest::Approx(f21.pressure.value).epsilon(1e-15));
}

TEST_CASE("truncation and quadrature soundness") {
  const PlateConfiguration cfg{mat("Si-static"), mat("Au-drude"), 5e-7, 300.0};
  NumericalSettings loose;
  loose.matsubara_rel_tol = 1e-7;
  const auto base = free_energy(cfg, loose);
  NumericalSettings deeper = loose;
  deeper.matsubara_rel_tol = 1e-12;
  const auto more = free_energy(cfg, deeper);
  CHECK(more.diagnostics.terms_used > base.diagnostics.terms_used);
  CHECK(std::abs(more.value - base.value) <= base.diagnostics.truncation_error + base.diagnostics.quadrature_error);

  NumericalSettings quad = loose;
  quad.y_quad_rel_tol = 1e-8;
  const auto coarse = free_energy(cfg, quad);
  quad.y_quad_rel_tol = 5e-9;
  const auto fine = free_energy(cfg, quad);
  CHECK(std::abs(fine.value - coarse.value) <= coarse.diagnostics.quadrature_error + 1e-15 * std::abs(coarse.value));
}

TEST_CASE("convergence failure at the term cap") {
  NumericalSettings ns;
  ns.l_max_cap = 10;
  CHECK(code_of([&] { free_energy({mat("Si-static"), mat("Si-static"), 1e-6, 10.0}, ns); }) ==
        ErrorCode::convergence_failure);
}

TEST_CASE("pressure is the separation derivative of the free energy") {
  const PlateConfiguration cfg{mat("Si-static"), mat("Au-plasma"), 6e-7, 300.0};
  const auto ns = NumericalSettings::precise();
  const auto p = pressure(cfg, ns);
  auto f = [&](double a) {
    auto c = cfg;
    c.separation = a;
    return free_energy(c, ns).value;
  };
  const double h = 1e-2 * cfg.separation;
  const double d1 = (f(cfg.separation + h) - f(cfg.separation - h)) / (2 * h);
  const double d2 = (f(cfg.separation + h / 2) - f(cfg.separation - h / 2)) / h;
  const double richardson = (4 * d2 - d1) / 3;
  CHECK(-richardson == doctest::Approx(p.value).epsilon(1e-7));
}

TEST_CASE("continuity with the zero-temperature energy") {
  const double a = 1e-6;
  const double t = 1e-3 * hbar_c / (4 * pi * constants::k_B * a);  // tau = 1e-3
  const PlateConfiguration cfg{mat("Si-static"), mat("SiO2-static"), a, t};
  const auto ns = NumericalSettings::precise();
  const double f = free_energy(cfg, ns).value;
  const double e = zero_temperature_energy(cfg, ns).value;
  CHECK(std::abs(f - e) / std::abs(e) < 1e-4);
}

TEST_CASE("thermal correction grows with temperature") {
  double prev = 0.0;
  for (double t : {20.0, 60.0, 120.0, 200.0, 300.0}) {
    const auto tc = thermal_correction({mat("Si-static"), mat("SiO2-static"), 4e-7, t});
    const double df = std::abs(tc.abel_plana.free_energy.value);
    CHECK(df > prev);
    CHECK(tc.abel_plana.free_energy.value == tc.from_zero_temperature.free_energy.value);
    CHECK_FALSE(tc.temperature_dependent_materials);
    prev = df;
  }
}

TEST_CASE("similar dielectrics: tau^3 coefficient of the thermal correction") {
  const double a = 1e-6;
  const double eps = 11.67;
  const double lead = -hbar_c / (32 * pi * pi * a * a * a) * specfun::zeta3() / (8 * pi * pi) * (eps - 1) *
                      (eps - 1) / (eps + 1);
  double prev_gap = 1.0;
  for (double t : {4.0, 1.0}) {
    const auto tc = thermal_correction({mat("Si-static"), mat("Si-static"), a, t}, NumericalSettings::precise());
    const double tau = asymptotics::tau_of(a, t);
    const double gap = std::abs(tc.abel_plana.free_energy.value / (tau * tau * tau) / lead - 1);
    CHECK(gap < prev_gap);
    prev_gap = gap;
  }
  CHECK(prev_gap < 3e-2);  // the tau^4 term is still ~2% at tau = 5.5e-3
}

TEST_CASE("entropy of similar dielectrics approaches the tau^2 law") {
  const double a = 1e-6;
  const double eps = 11.67;
  const double coef = 3 * constants::k_B * specfun::zeta3() * (eps - 1) * (eps - 1) / (64 * pi * pi * pi * a * a * (eps + 1));
  double prev_gap = 1.0;
  for (double t : {4.0, 2.0, 1.0, 0.5}) {
    const auto s = entropy({mat("Si-static"), mat("Si-static"), a, t});
    const double tau = asymptotics::tau_of(a, t);
    CHECK(s.value > 0.0);
    const double gap = std::abs(s.value / (tau * tau) / coef - 1);
    CHECK(gap < prev_gap);
    prev_gap = gap;
  }
  CHECK(prev_gap < 3e-2);
}

TEST_CASE("entropy of ideal metals at small tau") {
  const double a = 1e-6;
  const double t = 1.0;
  const double tau = asymptotics::tau_of(a, t);
  const auto s = entropy({mat("ideal-metal"), mat("ideal-metal"), a, t});
  const double coef = 3 * constants::k_B * specfun::zeta3() / (32 * pi * pi * pi * a * a);
  CHECK(s.value / (tau * tau) == doctest::Approx(coef).epsilon(1e-2));
}

TEST_CASE("dc conductivity leaves a residual entropy") {
  const double a = 1e-6;
  const auto s = entropy({mat("Si-dc"), mat("Si-dc"), a, 1.0});
  const double residual =
      asymptotics::dc_violation_entropy(11.67, a, asymptotics::ConfigKind::dielectric_dielectric);
  CHECK(s.value == doctest::Approx(residual).epsilon(1e-3));
}

TEST_CASE("temperature-dependent materials report both corrections") {
  const auto tc = thermal_correction({mat("Au-drude"), mat("Au-drude"), 1e-6, 300.0});
  CHECK(tc.temperature_dependent_materials == false);  // constant relaxation
  auto drude = std::get<materials::DrudeModel>(mat("Au-drude"));
  drude.relaxation.table = {{0.0, 1e11}, {300.0, 5.32e13}};
  const auto td = thermal_correction({drude, drude, 1e-6, 300.0});
  CHECK(td.temperature_dependent_materials);
  CHECK(td.abel_plana.free_energy.value != td.from_zero_temperature.free_energy.value);
}

TEST_CASE("repeat evaluations are bit-identical") {
  const PlateConfiguration cfg{mat("Si-static"), mat("Au-plasma"), 2e-7, 150.0};
  const auto a = compute(cfg);
  const auto b = compute(cfg);
  CHECK(a.free_energy.value == b.free_energy.value);
  CHECK(a.pressure.value == b.pressure.value);
  CHECK(a.entropy.value == b.entropy.value);
  CHECK(a.attractive);
}

}
