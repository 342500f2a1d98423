#include "casimir/specfun.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "casimir/error.hpp"

namespace casimir::specfun {

namespace {

constexpr double kZeta2 = std::numbers::pi * std::numbers::pi / 6.0;
constexpr double kZeta3 = 1.2020569031595942853997381615114499907650;

// zeta(-m) for m = 0..15 (zero at even m > 0).
constexpr std::array<double, 16> kZetaNegative = {
    -0.5,           -1.0 / 12.0, 0.0, 1.0 / 120.0, 0.0, -1.0 / 252.0,    0.0, 1.0 / 240.0,
    0.0,            -1.0 / 132.0, 0.0, 691.0 / 32760.0, 0.0, -1.0 / 12.0, 0.0, 3617.0 / 8160.0};

double zeta_of(int s) {
  if (s == 3) return kZeta3;
  if (s == 2) return kZeta2;
  if (s <= 0 && -s < static_cast<int>(kZetaNegative.size())) return kZetaNegative[-s];
  return std::numeric_limits<double>::quiet_NaN();
}

// Li_n(e^mu) = sum_{k != n-1} zeta(n-k) mu^k / k! + mu^{n-1}/(n-1)! (H_{n-1} - ln(-mu)),
// convergent for |mu| < 2 pi; used only for |mu| < 0.06.
double polylog_near_one(int n, double mu) {
  const double harmonic = (n == 2) ? 1.0 : 1.5;
  double sum = 0.0;
  double power = 1.0;  // mu^k / k!
  for (int k = 0; k < n + 14; ++k) {
    if (k > 0) power *= mu / k;
    if (k == n - 1) {
      sum += power * (harmonic - std::log(-mu));
    } else {
      sum += zeta_of(n - k) * power;
    }
  }
  return sum;
}

}  // namespace

void PrecisionPolicy::validate() const {
  if (!(rel_tol > 0.0 && rel_tol < 1e-3)) {
    throw Error(ErrorCode::domain, "rel_tol must lie in (0, 1e-3)");
  }
  if (max_terms < 50) throw Error(ErrorCode::domain, "max_terms must be >= 50");
}

double zeta3() { return kZeta3; }

double polylog_tail_bound(int n, double z, long terms) {
  const double k1 = static_cast<double>(terms + 1);
  return std::pow(z, k1) / (std::pow(k1, n) * (1.0 - z));
}

double polylog(int n, double z, const PrecisionPolicy& policy) {
  policy.validate();
  if (n != 2 && n != 3) {
    throw Error(ErrorCode::domain, "polylog order " + std::to_string(n) + " unsupported");
  }
  if (!(z >= 0.0 && z <= 1.0)) throw Error(ErrorCode::domain, "polylog argument outside [0, 1]");
  if (z == 0.0) return 0.0;
  if (z == 1.0) return zeta_of(n);
  if (z >= 0.95) return polylog_near_one(n, std::log(z));

  double sum = 0.0;
  double zk = 1.0;
  for (long k = 1; k <= policy.max_terms; ++k) {
    zk *= z;
    const double kd = static_cast<double>(k);
    sum += zk / (n == 2 ? kd * kd : kd * kd * kd);
    if (polylog_tail_bound(n, z, k) <= policy.rel_tol * sum) return sum;
  }
  throw Error(ErrorCode::convergence_failure, "polylog series exceeded max_terms");
}

double exp_integral_ei(double x, const PrecisionPolicy& policy) {
  policy.validate();
  if (!(x < 0.0)) throw Error(ErrorCode::domain, "exp_integral_ei requires x < 0");
  if (std::isinf(x)) return -0.0;

  const double eps = std::min(policy.rel_tol, 1e-15);
  if (-x <= kEiSeriesSwitch) {
    // Ei(x) = gamma + ln|x| + sum_{k>=1} x^k / (k k!)
    constexpr double euler_gamma = 0.57721566490153286060651209008240243;
    double term = 1.0;
    double sum = 0.0;
    for (long k = 1; k <= policy.max_terms; ++k) {
      term *= x / static_cast<double>(k);
      const double contrib = term / static_cast<double>(k);
      sum += contrib;
      if (std::abs(contrib) < eps * std::abs(sum)) break;
    }
    return euler_gamma + std::log(-x) + sum;
  }

  // Modified Lentz evaluation of the continued fraction for E1(t), t = -x.
  const double t = -x;
  constexpr double tiny = 1e-300;
  double b = t + 1.0;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (long i = 1; i <= policy.max_terms; ++i) {
    const double an = -static_cast<double>(i) * static_cast<double>(i);
    b += 2.0;
    d = 1.0 / (an * d + b);
    c = b + an / c;
    const double del = c * d;
    h *= del;
    if (std::abs(del - 1.0) < eps) return -h * std::exp(-t);
  }
  throw Error(ErrorCode::convergence_failure, "Ei continued fraction did not converge");
}

}  // namespace casimir::specfun
