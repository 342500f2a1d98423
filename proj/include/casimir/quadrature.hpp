#pragma once

// Globally adaptive Gauss-Kronrod (G7/K15) integration of small vector-valued
// integrands. Header-only so the integrand inlines into the panel loop.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

namespace casimir::quad {

template <std::size_t N, class Real = double>
using Vec = std::array<Real, N>;

/// Compensated (Neumaier) accumulator.
template <class Real = double>
class BasicNeumaierSum {
 public:
  void add(Real x) {
    const Real t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  Real value() const { return sum_ + comp_; }

 private:
  Real sum_ = 0;
  Real comp_ = 0;
};

using NeumaierSum = BasicNeumaierSum<double>;

template <std::size_t N, class Real = double>
struct Result {
  Vec<N, Real> value{};
  Vec<N, Real> error{};      // includes a rounding floor of eps * integral of |f|
  Vec<N, Real> abs_value{};  // integral of |f|
  int evaluations = 0;
  int panels = 0;
  bool converged = true;
};

namespace detail {

inline constexpr std::array<long double, 8> kXgk = {
    0.991455371120812639206854697526329L, 0.949107912342758524526189684047851L,
    0.864864423359769072789712788640926L, 0.741531185599394439863864773280788L,
    0.586087235467691130294144845693013L, 0.405845151377397166906606412076961L,
    0.207784955007898467600689403773245L, 0.000000000000000000000000000000000L};
inline constexpr std::array<long double, 8> kWgk = {
    0.022935322010529224963732008058970L, 0.063092092629978553290700663189204L,
    0.104790010322250183839876322541518L, 0.140653259715525918745189590510238L,
    0.169004726639267902826583426598550L, 0.190350578064785409913256402421014L,
    0.204432940075298892414161999234649L, 0.209482141084727828012999174891714L};
inline constexpr std::array<long double, 4> kWg = {
    0.129484966168869693270611432679082L, 0.279705391489276667901467771423780L,
    0.381830050505118944950369775488975L, 0.417959183673469387755102040816327L};

template <std::size_t N, class Real>
struct Panel {
  Real a = 0;
  Real b = 0;
  Vec<N, Real> value{};
  Vec<N, Real> error{};  // heuristic truncation error, no rounding floor
  Vec<N, Real> abs_value{};
};

// QUADPACK's error heuristic without the roundoff floor, which is accounted
// separately so that refinement is never requested below machine precision.
template <class Real>
Real kronrod_error(Real diff, Real resasc) {
  if (resasc == 0 || diff == 0) return diff;
  const Real scaled = std::pow(200 * diff / resasc, Real(1.5));
  return resasc * std::min(Real(1), scaled);
}

template <std::size_t N, class Real, class F>
Panel<N, Real> gk15(F& f, Real a, Real b) {
  const Real center = (a + b) / 2;
  const Real half = (b - a) / 2;

  std::array<Vec<N, Real>, 15> fv;
  fv[7] = f(center);
  for (int j = 0; j < 7; ++j) {
    const Real dx = half * static_cast<Real>(kXgk[j]);
    fv[j] = f(center - dx);
    fv[14 - j] = f(center + dx);
  }
  Panel<N, Real> p;
  p.a = a;
  p.b = b;
  const Real h = std::abs(half);
  for (std::size_t k = 0; k < N; ++k) {
    Real resk = fv[7][k] * static_cast<Real>(kWgk[7]);
    Real resg = fv[7][k] * static_cast<Real>(kWg[3]);
    Real resabs = std::abs(resk);
    for (int j = 0; j < 7; ++j) {
      const Real pair = fv[j][k] + fv[14 - j][k];
      resk += static_cast<Real>(kWgk[j]) * pair;
      resabs += static_cast<Real>(kWgk[j]) * (std::abs(fv[j][k]) + std::abs(fv[14 - j][k]));
      if (j % 2 == 1) resg += static_cast<Real>(kWg[j / 2]) * pair;
    }
    const Real mean = resk / 2;
    Real asc = static_cast<Real>(kWgk[7]) * std::abs(fv[7][k] - mean);
    for (int j = 0; j < 7; ++j) {
      asc += static_cast<Real>(kWgk[j]) * (std::abs(fv[j][k] - mean) + std::abs(fv[14 - j][k] - mean));
    }
    p.value[k] = resk * half;
    p.abs_value[k] = resabs * h;
    p.error[k] = kronrod_error(std::abs((resk - resg) * half), asc * h);
  }
  return p;
}

}  // namespace detail

struct Options {
  double rel_tol = 1e-12;
  double abs_tol = 0.0;
  int max_panels = 4000;
  // Semi-infinite integrals: panels of the last width are appended while the
  // last panel still contributes more than tail_fraction * rel_tol of the total.
  bool extend_tail = false;
  double tail_fraction = 1e-2;
  int max_tail_panels = 64;
};

/// Integrates f over the partition given by `breakpoints` (strictly increasing,
/// at least two entries), bisecting the worst panel until every component
/// satisfies err <= max(abs_tol, rel_tol * |value|). `Real` is the working
/// precision of the rule and the accumulation.
template <std::size_t N, class Real = double, class F>
Result<N, Real> integrate(F&& f, std::span<const double> breakpoints, const Options& opt) {
  using Panel = detail::Panel<N, Real>;
  constexpr Real eps = std::numeric_limits<Real>::epsilon();
  std::vector<Panel> panels;
  panels.reserve(breakpoints.size() + 16);
  int evaluations = 0;
  for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
    panels.push_back(detail::gk15<N, Real>(f, static_cast<Real>(breakpoints[i]), static_cast<Real>(breakpoints[i + 1])));
    evaluations += 15;
  }

  auto totals = [&panels](Vec<N, Real>& value, Vec<N, Real>& error) {
    for (std::size_t k = 0; k < N; ++k) {
      BasicNeumaierSum<Real> v, e;
      for (const Panel& p : panels) {
        v.add(p.value[k]);
        e.add(p.error[k]);
      }
      value[k] = v.value();
      error[k] = e.value();
    }
  };

  Vec<N, Real> value{}, error{};
  totals(value, error);

  if (opt.extend_tail && !panels.empty()) {
    for (int extra = 0; extra < opt.max_tail_panels; ++extra) {
      const Panel& last = panels.back();
      bool significant = false;
      for (std::size_t k = 0; k < N; ++k) {
        if (std::abs(last.value[k]) > opt.tail_fraction * opt.rel_tol * std::abs(value[k]) &&
            std::abs(last.value[k]) > opt.abs_tol) {
          significant = true;
        }
      }
      if (!significant) break;
      const Real width = last.b - last.a;
      panels.push_back(detail::gk15<N, Real>(f, last.b, last.b + width));
      evaluations += 15;
      totals(value, error);
    }
  }

  auto satisfied = [&opt](const Vec<N, Real>& v, const Vec<N, Real>& e) {
    for (std::size_t k = 0; k < N; ++k) {
      if (e[k] > std::max<Real>(opt.abs_tol, opt.rel_tol * std::abs(v[k]))) return false;
    }
    return true;
  };
  auto badness = [&value](const Panel& p) {
    Real worst = 0;
    for (std::size_t k = 0; k < N; ++k) {
      const Real scale = std::max(std::abs(value[k]), std::numeric_limits<Real>::min());
      worst = std::max(worst, p.error[k] / scale);
    }
    return worst;
  };

  bool converged = satisfied(value, error);
  while (!converged && static_cast<int>(panels.size()) < opt.max_panels) {
    auto worst = std::max_element(panels.begin(), panels.end(),
                                  [&](const Panel& x, const Panel& y) { return badness(x) < badness(y); });
    const Real mid = (worst->a + worst->b) / 2;
    if (!(mid > worst->a && mid < worst->b)) break;  // interval exhausted
    const Panel left = detail::gk15<N, Real>(f, worst->a, mid);
    const Panel right = detail::gk15<N, Real>(f, mid, worst->b);
    evaluations += 30;
    *worst = left;
    panels.insert(worst + 1, right);
    totals(value, error);
    converged = satisfied(value, error);
  }

  Result<N, Real> r;
  r.value = value;
  r.evaluations = evaluations;
  r.panels = static_cast<int>(panels.size());
  r.converged = converged;
  for (std::size_t k = 0; k < N; ++k) {
    BasicNeumaierSum<Real> abs_sum;
    for (const Panel& p : panels) abs_sum.add(p.abs_value[k]);
    r.abs_value[k] = abs_sum.value();
    r.error[k] = error[k] + eps * r.abs_value[k];
  }
  return r;
}

/// Scalar convenience wrapper.
template <class F>
Result<1> integrate_scalar(F&& f, std::span<const double> breakpoints, const Options& opt) {
  auto wrapped = [&f](double x) { return Vec<1>{f(x)}; };
  return integrate<1>(wrapped, breakpoints, opt);
}

}  // namespace casimir::quad
