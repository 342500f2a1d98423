#include "casimir/reflection.hpp"

#include "casimir/constants.hpp"
#include "casimir/error.hpp"

namespace casimir::reflection {

namespace {

void check(double eps, const DimensionlessPoint& p) {
  if (!std::isfinite(eps) || !(eps >= 1.0)) {
    throw Error(ErrorCode::domain, "reflection coefficients need a finite eps >= 1");
  }
  if (!(p.zeta >= 0.0) || !(p.y >= p.zeta) || !std::isfinite(p.y)) {
    throw Error(ErrorCode::domain, "dimensionless point must satisfy 0 <= zeta <= y");
  }
}

double require_finite(std::optional<double> eps) {
  if (!eps) {
    throw Error(ErrorCode::domain, "divergent permittivity at zero frequency; use zero_freq_pair");
  }
  return *eps;
}

}  // namespace

double r_tm(double eps, const DimensionlessPoint& p) {
  check(eps, p);
  return tm_coefficient(eps, p.zeta, p.y);
}

double r_te(double eps, const DimensionlessPoint& p) {
  check(eps, p);
  return te_coefficient(eps, p.zeta, p.y);
}

double r_tm(std::optional<double> eps, const DimensionlessPoint& p) { return r_tm(require_finite(eps), p); }

double r_te(std::optional<double> eps, const DimensionlessPoint& p) { return r_te(require_finite(eps), p); }

double r0(double eps0) {
  if (!(eps0 >= 1.0) || !std::isfinite(eps0)) throw Error(ErrorCode::domain, "r0 needs a finite eps0 >= 1");
  return (eps0 - 1.0) / (eps0 + 1.0);
}

ZeroFreqPair zero_freq_pair(const materials::PermittivityModel& model, std::optional<double> separation) {
  using namespace materials;
  if (std::holds_alternative<IdealMetal>(model)) return {1.0, 1.0, 0.0};
  if (const auto* plasma = std::get_if<PlasmaModel>(&model)) {
    if (!separation || !(*separation > 0.0)) {
      throw Error(ErrorCode::domain, "plasma zero-frequency TE coefficient needs the separation");
    }
    return {1.0, 0.0, 2.0 * *separation * plasma->plasma_frequency / constants::c};
  }
  if (std::holds_alternative<DrudeModel>(model) || std::holds_alternative<DcAugmentedModel>(model)) {
    return {1.0, 0.0, 0.0};
  }
  if (const auto eps0 = static_eps(model)) return {r0(*eps0), 0.0, 0.0};
  // Tabulated data with a conducting low-frequency tail behaves as Drude.
  return {1.0, 0.0, 0.0};
}

}  // namespace casimir::reflection
