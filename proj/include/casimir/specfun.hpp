#pragma once

namespace casimir::specfun {

/// Series controls shared by the special functions.
/// Invariants: 0 < rel_tol < 1e-3, max_terms >= 50.
struct PrecisionPolicy {
  double rel_tol = 1e-12;
  long max_terms = 1'000'000;

  void validate() const;
};

/// Riemann zeta(3).
double zeta3();

/// Polylogarithm Li_n(z) for n in {2, 3} and real z in [0, 1].
///
/// Direct power series with a geometric tail bound for z < 0.95; closer to
/// the branch point the expansion in powers of ln z is used, and z = 1
/// returns zeta(n) exactly. Throws Error(domain) outside that range.
double polylog(int n, double z, const PrecisionPolicy& policy = {});

/// Upper bound on |Li_n(z) - sum_{k<=terms} z^k/k^n| for z < 1.
double polylog_tail_bound(int n, double z, long terms);

/// Exponential integral Ei(x) for x < 0 (equivalently -E1(-x)).
double exp_integral_ei(double x, const PrecisionPolicy& policy = {});

/// |x| at which exp_integral_ei switches from the power series to the
/// continued fraction.
inline constexpr double kEiSeriesSwitch = 2.0;

}  // namespace casimir::specfun
