#include "commands.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <thread>

#include <json.hpp>

#include "casimir/asymptotics.hpp"
#include "casimir/constants.hpp"
#include "casimir/lifshitz.hpp"
#include "casimir/specfun.hpp"

namespace casimir::cli {

namespace {

constexpr double nan = std::numeric_limits<double>::quiet_NaN();

template <class F>
auto parallel_map(std::size_t n, unsigned threads, F fn) {
  std::vector<decltype(fn(std::size_t{}))> out(n);
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  const auto workers = std::min<std::size_t>(threads, n);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < n; i = next++) out[i] = fn(i);
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  return out;
}

lifshitz::NumericalSettings settings(const RunConfig& cfg, const RunOptions& opts,
                                     const lifshitz::NumericalSettings& fallback) {
  auto ns = cfg.numerics.value_or(fallback);
  if (opts.tol) {
    ns.matsubara_rel_tol = *opts.tol;
    ns.y_quad_rel_tol = std::min(ns.y_quad_rel_tol, *opts.tol);
  }
  try {
    ns.validate();
  } catch (const Error& e) {
    throw ConfigError("--tol", e.what());
  }
  return ns;
}

lifshitz::PlateConfiguration plates(const RunConfig& cfg, double a, double t) {
  return {cfg.material_1, cfg.material_2, a, t};
}

// Failure bookkeeping: the first failing row (grid order) decides status.
struct Failure {
  std::optional<ErrorCode> code;
  std::string message;

  void capture(const Error& e) {
    if (!code) {
      code = e.code();
      message = e.what();
    }
  }
  std::string flag() const { return code ? std::string(to_string(*code)) : "ok"; }
};

void merge(CommandResult& result, const Failure& f) {
  if (f.code && result.status == kExitOk) {
    result.status = exit_code(*f.code);
    result.diagnostic = f.message;
  }
}

void put_json(nlohmann::ordered_json& j, const Table::Cell& c) {
  std::visit(
      [&](const auto& v) {
        using V = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<V, double>) {
          if (std::isfinite(v)) j = v;
          else j = format_number(v);  // JSON has no NaN/inf
        } else {
          j = v;
        }
      },
      c);
}

std::string cell_text(const Table::Cell& c) {
  if (const auto* d = std::get_if<double>(&c)) return format_number(*d);
  if (const auto* l = std::get_if<long>(&c)) return std::to_string(*l);
  return std::get<std::string>(c);
}

struct AsymptoticForm {
  enum class Kind { dielectric, metal_dielectric, ideal_metal } kind;
  double eps1 = 0.0;
  double eps2 = 0.0;

  asymptotics::AsymptoticResult eval(double a, double t, asymptotics::Which which) const {
    switch (kind) {
      case Kind::dielectric: return asymptotics::lowT_dielectric(eps1, eps2, a, t, which);
      case Kind::metal_dielectric: return asymptotics::lowT_metal_dielectric(eps2, a, t, which);
      case Kind::ideal_metal: return asymptotics::ideal_metal_lowT(a, t, which);
    }
    return {};
  }
};

AsymptoticForm asymptotic_form(const RunConfig& cfg) {
  using materials::IdealMetal;
  const bool ideal1 = std::holds_alternative<IdealMetal>(cfg.material_1);
  const bool ideal2 = std::holds_alternative<IdealMetal>(cfg.material_2);
  const auto static_of = [](const materials::PermittivityModel& m) -> std::optional<double> {
    if (materials::is_temperature_dependent(m)) return std::nullopt;
    return materials::static_eps(m);
  };
  if (ideal1 && ideal2) return {AsymptoticForm::Kind::ideal_metal};
  const auto e1 = static_of(cfg.material_1);
  const auto e2 = static_of(cfg.material_2);
  if (ideal1 && e2) return {AsymptoticForm::Kind::metal_dielectric, 0.0, *e2};
  if (ideal2 && e1) return {AsymptoticForm::Kind::metal_dielectric, 0.0, *e1};
  if (e1 && e2) return {AsymptoticForm::Kind::dielectric, *e1, *e2};
  throw ConfigError("material_1/material_2",
                    "low-temperature asymptotics need finite static permittivities or an ideal metal");
}

}  // namespace

int exit_code(ErrorCode code) {
  switch (code) {
    case ErrorCode::convergence_failure:
    case ErrorCode::quadrature_failure:
    case ErrorCode::derivative_unstable:
    case ErrorCode::ladder_unconverged: return kExitConvergence;
    case ErrorCode::io: return kExitIo;
    default: return kExitConfig;
  }
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.16e", v);
  return buf;
}

void Table::write_csv(std::ostream& out) const {
  for (std::size_t i = 0; i < columns.size(); ++i) out << (i ? "," : "") << columns[i];
  out << '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << cell_text(row[i]);
    out << '\n';
  }
  for (const auto& [key, value] : summary) out << "# " << key << '=' << cell_text(value) << '\n';
}

void Table::write_json(std::ostream& out) const {
  nlohmann::ordered_json doc;
  doc["rows"] = nlohmann::ordered_json::array();
  for (const auto& row : rows) {
    nlohmann::ordered_json r;
    for (std::size_t i = 0; i < row.size(); ++i) {
      nlohmann::ordered_json v;
      put_json(v, row[i]);
      r[columns[i]] = v;
    }
    doc["rows"].push_back(r);
  }
  nlohmann::ordered_json s = nlohmann::ordered_json::object();
  for (const auto& [key, value] : summary) {
    nlohmann::ordered_json v;
    put_json(v, value);
    s[key] = v;
  }
  doc["summary"] = s;
  out << doc.dump(2) << '\n';
}

void Table::write(std::ostream& out, OutputFormat format) const {
  format == OutputFormat::json ? write_json(out) : write_csv(out);
}

CommandResult cmd_compute(const RunConfig& cfg, const RunOptions& opts) {
  const auto ns = settings(cfg, opts, {});
  const auto grid = cfg.grid();

  struct Outcome {
    lifshitz::EnergyPressure ep;
    lifshitz::Quantity s;
    Failure failure;
  };
  const auto outcomes = parallel_map(grid.size(), opts.threads, [&](std::size_t i) {
    Outcome o;
    o.ep.free_energy.value = o.ep.pressure.value = nan;
    o.ep.free_energy.error = o.ep.pressure.error = nan;
    o.s.value = o.s.error = nan;
    const auto pc = plates(cfg, grid[i].separation, grid[i].temperature);
    try {
      o.ep = lifshitz::energy_and_pressure(pc, ns);
      if (pc.temperature > 0.0) o.s = lifshitz::entropy(pc, ns);
    } catch (const Error& e) {
      o.failure.capture(e);
    }
    return o;
  });

  CommandResult result;
  result.table.columns = {"a_m",   "T_K",   "tau",   "F_J_per_m2",   "P_Pa", "S_J_per_K_m2",
                          "err_F", "err_P", "err_S", "l_terms_used", "flag"};
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto& o = outcomes[i];
    const double a = grid[i].separation;
    const double t = grid[i].temperature;
    result.table.rows.push_back({a, t, asymptotics::tau_of(a, t), o.ep.free_energy.value, o.ep.pressure.value,
                                 o.s.value, o.ep.free_energy.error, o.ep.pressure.error, o.s.error,
                                 o.ep.free_energy.diagnostics.terms_used, o.failure.flag()});
    merge(result, o.failure);
  }
  return result;
}

CommandResult cmd_compare_asymptotic(const RunConfig& cfg, const RunOptions& opts) {
  const auto ns = settings(cfg, opts, lifshitz::NumericalSettings::precise());
  const auto form = asymptotic_form(cfg);
  const auto grid = cfg.grid();
  for (const auto& p : grid) {
    if (!(p.temperature > 0.0)) throw ConfigError("temperature_K", "thermal corrections need T > 0");
  }

  struct Outcome {
    lifshitz::EnergyPressure exact;
    Failure failure;
  };
  const auto outcomes = parallel_map(grid.size(), opts.threads, [&](std::size_t i) {
    Outcome o;
    o.exact.free_energy.value = o.exact.pressure.value = nan;
    o.exact.free_energy.error = o.exact.pressure.error = nan;
    try {
      o.exact = lifshitz::thermal_correction(plates(cfg, grid[i].separation, grid[i].temperature), ns).abel_plana;
    } catch (const Error& e) {
      o.failure.capture(e);
    }
    return o;
  });

  CommandResult result;
  result.table.columns = {"a_m",      "T_K", "tau", "quantity", "exact_correction", "asymptotic_correction",
                          "rel_diff", "err_exact", "flag"};
  std::vector<double> taus, dfs, dps;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto& o = outcomes[i];
    const double a = grid[i].separation;
    const double t = grid[i].temperature;
    const double tau = asymptotics::tau_of(a, t);
    const auto emit = [&](const char* name, const lifshitz::Quantity& q, asymptotics::Which which) {
      const double asym = form.eval(a, t, which).correction;
      const double rel = asym != 0.0 ? (q.value - asym) / std::abs(asym) : nan;
      result.table.rows.push_back({a, t, tau, std::string(name), q.value, asym, rel, q.error, o.failure.flag()});
    };
    emit("free_energy", o.exact.free_energy, asymptotics::Which::free_energy);
    emit("pressure", o.exact.pressure, asymptotics::Which::pressure);
    merge(result, o.failure);
    if (!o.failure.code) {
      taus.push_back(tau);
      dfs.push_back(o.exact.free_energy.value);
      dps.push_back(o.exact.pressure.value);
    }
  }

  // Slopes over the smallest decade of tau.
  std::vector<double> xs, fs, ps;
  if (!taus.empty()) {
    const double tau_min = *std::min_element(taus.begin(), taus.end());
    for (std::size_t i = 0; i < taus.size(); ++i) {
      if (taus[i] <= 10.0 * tau_min) {
        xs.push_back(taus[i]);
        fs.push_back(dfs[i]);
        ps.push_back(dps[i]);
      }
    }
  }
  result.table.summary = {{"slope_free_energy", loglog_slope(xs, fs)},
                          {"slope_pressure", loglog_slope(xs, ps)},
                          {"slope_points", static_cast<long>(xs.size())}};
  return result;
}

CommandResult cmd_nernst_check(const RunConfig& cfg, const RunOptions& opts) {
  lifshitz::NumericalSettings fallback;
  fallback.y_quad_rel_tol = 1e-13;
  fallback.matsubara_rel_tol = 1e-13;
  const auto ns = settings(cfg, opts, fallback);
  if (cfg.separations.size() != 1 || (cfg.sweep && cfg.sweep->variable == Sweep::Variable::separation)) {
    throw ConfigError("separation_m", "nernst-check needs a single separation");
  }
  const double a = cfg.separations.front();

  struct Outcome {
    lifshitz::Quantity s;
    Failure failure;
  };
  const auto outcomes = parallel_map(cfg.ladder.size(), opts.threads, [&](std::size_t i) {
    Outcome o;
    o.s.value = o.s.error = nan;
    try {
      o.s = lifshitz::entropy(plates(cfg, a, cfg.ladder[i]), ns);
    } catch (const Error& e) {
      o.failure.capture(e);
    }
    return o;
  });

  CommandResult result;
  result.table.columns = {"a_m", "T_K", "tau", "S_J_per_K_m2", "err_S", "l_terms_used", "flag"};
  std::vector<double> taus, ss, errs;
  for (std::size_t i = 0; i < cfg.ladder.size(); ++i) {
    const auto& o = outcomes[i];
    const double t = cfg.ladder[i];
    taus.push_back(asymptotics::tau_of(a, t));
    ss.push_back(o.s.value);
    errs.push_back(o.s.error);
    result.table.rows.push_back(
        {a, t, taus.back(), o.s.value, o.s.error, o.s.diagnostics.terms_used, o.failure.flag()});
    merge(result, o.failure);
  }
  if (result.status != kExitOk) return result;

  const auto fit = fit_entropy_ladder(taus, ss, errs);
  constexpr double kMaxResidual = 1e-2;
  std::string verdict;
  if (!(fit.max_residual <= kMaxResidual)) {
    verdict = "UNCONVERGED";
    result.status = exit_code(ErrorCode::ladder_unconverged);
    result.diagnostic = std::string(to_string(ErrorCode::ladder_unconverged)) +
                        ": fit residual " + format_number(fit.max_residual) + " exceeds " +
                        format_number(kMaxResidual);
  } else {
    verdict = std::abs(fit.s0) <= 3.0 * fit.s0_error ? "PASS" : "VIOLATION";
  }

  // Reference residual for the two dc-conductivity configurations.
  double expected = nan;
  const auto* dc1 = std::get_if<materials::DcAugmentedModel>(&cfg.material_1);
  const auto* dc2 = std::get_if<materials::DcAugmentedModel>(&cfg.material_2);
  const bool ideal1 = std::holds_alternative<materials::IdealMetal>(cfg.material_1);
  const bool ideal2 = std::holds_alternative<materials::IdealMetal>(cfg.material_2);
  if (dc1 && dc2 && dc1->base.static_value() == dc2->base.static_value()) {
    expected = asymptotics::dc_violation_entropy(dc1->base.static_value(), a,
                                                 asymptotics::ConfigKind::dielectric_dielectric);
  } else if ((dc1 && ideal2) || (dc2 && ideal1)) {
    expected = asymptotics::dc_violation_entropy((dc1 ? dc1 : dc2)->base.static_value(), a,
                                                 asymptotics::ConfigKind::metal_dielectric);
  }

  result.table.summary = {{"s0", fit.s0},
                          {"s0_error", fit.s0_error},
                          {"s2", fit.s2},
                          {"s3", fit.s3},
                          {"fit_max_residual", fit.max_residual},
                          {"expected_s0", expected},
                          {"rel_diff_expected", std::isnan(expected) ? nan : (fit.s0 - expected) / expected},
                          {"verdict", verdict}};
  return result;
}

namespace {

LadderFit weighted_fit(const std::vector<double>& tau, const std::vector<double>& s,
                       const std::vector<double>& err) {
  const std::size_t n = tau.size();
  if (n < 4 || s.size() != n || err.size() != n) {
    throw Error(ErrorCode::domain, "ladder fit needs at least 4 matching points");
  }
  // Columns scaled to unit maximum so the normal equations stay well conditioned.
  using L = long double;
  L scale = 0;
  L smax = 0;
  for (std::size_t i = 0; i < n; ++i) {
    scale = std::max<L>(scale, tau[i]);
    smax = std::max<L>(smax, std::abs(s[i]));
  }
  const L c2 = scale * scale;
  const L c3 = c2 * scale;
  L a[3][4] = {};
  for (std::size_t i = 0; i < n; ++i) {
    const L sigma = std::max<L>({err[i], 1e-15L * std::abs(s[i]), 1e-300L});
    const L w = 1 / (sigma * sigma);
    const L u = tau[i] / scale;
    const L row[3] = {1, u * u, u * u * u};
    for (int r = 0; r < 3; ++r) {
      for (int c = 0; c < 3; ++c) a[r][c] += w * row[r] * row[c];
      a[r][3] += w * row[r] * s[i];
    }
  }
  // Inverse by Gauss-Jordan with partial pivoting.
  L inv[3][3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
  L m[3][3];
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) m[r][c] = a[r][c];
  for (int col = 0; col < 3; ++col) {
    int piv = col;
    for (int r = col + 1; r < 3; ++r)
      if (std::abs(m[r][col]) > std::abs(m[piv][col])) piv = r;
    std::swap(m[col], m[piv]);
    std::swap(inv[col], inv[piv]);
    const L d = m[col][col];
    if (d == 0) throw Error(ErrorCode::ladder_unconverged, "singular ladder fit");
    for (int c = 0; c < 3; ++c) {
      m[col][c] /= d;
      inv[col][c] /= d;
    }
    for (int r = 0; r < 3; ++r) {
      if (r == col) continue;
      const L f = m[r][col];
      for (int c = 0; c < 3; ++c) {
        m[r][c] -= f * m[col][c];
        inv[r][c] -= f * inv[col][c];
      }
    }
  }
  L coef[3] = {};
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) coef[r] += inv[r][c] * a[c][3];

  LadderFit fit;
  fit.s0 = static_cast<double>(coef[0]);
  fit.s2 = static_cast<double>(coef[1] / c2);
  fit.s3 = static_cast<double>(coef[2] / c3);
  L chi2 = 0;
  L worst = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const L u = tau[i] / scale;
    const L model = coef[0] + coef[1] * u * u + coef[2] * u * u * u;
    const L sigma = std::max<L>({err[i], 1e-15L * std::abs(s[i]), 1e-300L});
    chi2 += (s[i] - model) * (s[i] - model) / (sigma * sigma);
    worst = std::max(worst, std::abs(s[i] - model));
  }
  fit.chi2 = static_cast<double>(chi2);
  fit.max_residual = smax > 0 ? static_cast<double>(worst / smax) : 0.0;
  const L dof = static_cast<L>(n - 3);
  fit.s0_error = static_cast<double>(std::sqrt(inv[0][0] * std::max<L>(1, chi2 / dof)));
  return fit;
}

}  // namespace

LadderFit fit_entropy_ladder(const std::vector<double>& tau, const std::vector<double>& s,
                             const std::vector<double>& err) {
  auto fit = weighted_fit(tau, s, err);
  if (tau.size() < 5) return fit;
  // Truncation of the tau expansion shows up as a shift of s0 when the
  // largest-tau point is dropped; count that shift as a systematic error.
  const auto hi = static_cast<std::size_t>(std::max_element(tau.begin(), tau.end()) - tau.begin());
  auto drop = [hi](std::vector<double> v) {
    v.erase(v.begin() + static_cast<std::ptrdiff_t>(hi));
    return v;
  };
  const auto reduced = weighted_fit(drop(tau), drop(s), drop(err));
  fit.s0_error = std::hypot(fit.s0_error, fit.s0 - reduced.s0);
  return fit;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  std::vector<std::pair<double, double>> pts;
  for (std::size_t i = 0; i < x.size() && i < y.size(); ++i) {
    if (x[i] > 0.0 && y[i] != 0.0 && std::isfinite(y[i])) pts.emplace_back(std::log(x[i]), std::log(std::abs(y[i])));
  }
  if (pts.size() < 2) return nan;
  double mx = 0, my = 0;
  for (const auto& [u, v] : pts) {
    mx += u;
    my += v;
  }
  mx /= pts.size();
  my /= pts.size();
  double sxy = 0, sxx = 0;
  for (const auto& [u, v] : pts) {
    sxy += (u - mx) * (v - my);
    sxx += (u - mx) * (u - mx);
  }
  return sxx > 0 ? sxy / sxx : nan;
}

}  // namespace casimir::cli
