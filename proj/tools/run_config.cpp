#include "run_config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "casimir/error.hpp"
#include "casimir/material_io.hpp"

namespace casimir::cli {

namespace {

using nlohmann::json;

double number(const json& j, const std::string& field) {
  if (!j.is_number()) throw ConfigError(field, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw ConfigError(field, "must be finite");
  return v;
}

std::vector<double> number_list(const json& j, const std::string& field) {
  std::vector<double> out;
  if (j.is_array()) {
    if (j.empty()) throw ConfigError(field, "list is empty");
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(number(j[i], field + "[" + std::to_string(i) + "]"));
  } else {
    out.push_back(number(j, field));
  }
  return out;
}

materials::PermittivityModel material(const json& j, const std::string& field, const std::filesystem::path& base,
                                      std::string& name) {
  try {
    if (j.is_string()) {
      name = j.get<std::string>();
      return materials::resolve_material(name, base);
    }
    if (j.is_object()) {
      name = "inline";
      return materials::parse_material_json(j.dump(), base);
    }
  } catch (const Error& e) {
    if (e.code() == ErrorCode::io) throw;
    throw ConfigError(field, e.what());
  }
  throw ConfigError(field, "expected a preset name, a file path or an object");
}

Sweep parse_sweep(const json& j) {
  if (!j.is_object()) throw ConfigError("sweep", "expected an object");
  Sweep s;
  for (const auto& [key, value] : j.items()) {
    const std::string field = "sweep." + key;
    if (key == "variable") {
      const auto v = value.is_string() ? value.get<std::string>() : "";
      if (v == "T" || v == "temperature") s.variable = Sweep::Variable::temperature;
      else if (v == "a" || v == "separation") s.variable = Sweep::Variable::separation;
      else throw ConfigError(field, "expected \"T\" or \"a\"");
    } else if (key == "from") {
      s.from = number(value, field);
    } else if (key == "to") {
      s.to = number(value, field);
    } else if (key == "points") {
      if (!value.is_number_integer()) throw ConfigError(field, "expected an integer");
      s.points = value.get<int>();
    } else if (key == "spacing") {
      const auto v = value.is_string() ? value.get<std::string>() : "";
      if (v == "linear") s.spacing = Sweep::Spacing::linear;
      else if (v == "log") s.spacing = Sweep::Spacing::log;
      else throw ConfigError(field, "expected \"linear\" or \"log\"");
    } else {
      throw ConfigError(field, "unknown key");
    }
  }
  if (!j.contains("from") || !j.contains("to")) throw ConfigError("sweep", "needs from and to");
  if (!(s.from < s.to)) throw ConfigError("sweep", "range must be strictly increasing");
  if (s.points < 2) throw ConfigError("sweep.points", "must be >= 2");
  if (s.spacing == Sweep::Spacing::log && !(s.from > 0.0)) throw ConfigError("sweep.from", "log spacing needs from > 0");
  return s;
}

lifshitz::NumericalSettings parse_numerics(const json& j) {
  if (j.is_string()) {
    const auto v = j.get<std::string>();
    if (v == "precise") return lifshitz::NumericalSettings::precise();
    if (v == "default") return {};
    throw ConfigError("numerics", "expected \"default\", \"precise\" or an object");
  }
  if (!j.is_object()) throw ConfigError("numerics", "expected a string or an object");
  lifshitz::NumericalSettings ns;
  for (const auto& [key, value] : j.items()) {
    const std::string field = "numerics." + key;
    if (key == "y_quad_rel_tol") ns.y_quad_rel_tol = number(value, field);
    else if (key == "matsubara_rel_tol") ns.matsubara_rel_tol = number(value, field);
    else if (key == "diff_step_fraction") ns.diff_step_fraction = number(value, field);
    else if (key == "l_max_cap") {
      if (!value.is_number_integer()) throw ConfigError(field, "expected an integer");
      ns.l_max_cap = value.get<long>();
    } else {
      throw ConfigError(field, "unknown key");
    }
  }
  try {
    ns.validate();
  } catch (const Error& e) {
    throw ConfigError("numerics", e.what());
  }
  return ns;
}

}  // namespace

std::vector<double> Sweep::values() const {
  std::vector<double> out(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) {
    const double f = static_cast<double>(i) / (points - 1);
    out[i] = spacing == Spacing::linear ? from + (to - from) * f : from * std::pow(to / from, f);
  }
  out.back() = to;
  return out;
}

std::vector<RunConfig::Point> RunConfig::grid() const {
  auto as = separations;
  auto ts = temperatures;
  if (sweep) (sweep->variable == Sweep::Variable::temperature ? ts : as) = sweep->values();
  std::vector<Point> out;
  out.reserve(as.size() * ts.size());
  for (double a : as)
    for (double t : ts) out.push_back({a, t});
  return out;
}

OutputFormat parse_format(const std::string& name) {
  if (name == "csv") return OutputFormat::csv;
  if (name == "json") return OutputFormat::json;
  throw ConfigError("format", "expected csv or json");
}

RunConfig parse_run_config(const std::string& text, const std::filesystem::path& base_dir) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("", e.what());
  }
  if (!doc.is_object()) throw ConfigError("", "config must be a JSON object");

  static const std::set<std::string> known = {"material_1", "material_2", "separation_m", "temperature_K", "sweep",
                                              "ladder_K", "numerics", "format", "out"};
  for (const auto& [key, value] : doc.items()) {
    if (!known.count(key)) throw ConfigError(key, "unknown key");
  }
  for (const char* required : {"material_1", "material_2"}) {
    if (!doc.contains(required)) throw ConfigError(required, "missing");
  }

  RunConfig cfg;
  cfg.material_1 = material(doc["material_1"], "material_1", base_dir, cfg.material_1_name);
  cfg.material_2 = material(doc["material_2"], "material_2", base_dir, cfg.material_2_name);
  if (doc.contains("sweep")) cfg.sweep = parse_sweep(doc["sweep"]);

  const bool sweeps_a = cfg.sweep && cfg.sweep->variable == Sweep::Variable::separation;
  const bool sweeps_t = cfg.sweep && cfg.sweep->variable == Sweep::Variable::temperature;
  if (doc.contains("separation_m")) cfg.separations = number_list(doc["separation_m"], "separation_m");
  else if (!sweeps_a) throw ConfigError("separation_m", "missing");
  if (doc.contains("temperature_K")) cfg.temperatures = number_list(doc["temperature_K"], "temperature_K");
  else if (!sweeps_t) cfg.temperatures = {300.0};

  for (double a : sweeps_a ? cfg.sweep->values() : cfg.separations) {
    if (!(a > 0.0)) throw ConfigError(sweeps_a ? "sweep" : "separation_m", "separations must be > 0");
  }
  for (double t : sweeps_t ? cfg.sweep->values() : cfg.temperatures) {
    if (!(t >= 0.0)) throw ConfigError(sweeps_t ? "sweep" : "temperature_K", "temperatures must be >= 0");
  }

  if (doc.contains("ladder_K")) {
    cfg.ladder = number_list(doc["ladder_K"], "ladder_K");
    if (cfg.ladder.size() < 4) throw ConfigError("ladder_K", "needs at least 4 temperatures");
    for (std::size_t i = 0; i < cfg.ladder.size(); ++i) {
      if (!(cfg.ladder[i] > 0.0) || (i > 0 && !(cfg.ladder[i] < cfg.ladder[i - 1]))) {
        throw ConfigError("ladder_K", "must be positive and strictly decreasing");
      }
    }
  }
  if (doc.contains("numerics")) cfg.numerics = parse_numerics(doc["numerics"]);
  if (doc.contains("format")) {
    if (!doc["format"].is_string()) throw ConfigError("format", "expected a string");
    cfg.format = parse_format(doc["format"].get<std::string>());
  }
  if (doc.contains("out")) {
    if (!doc["out"].is_string()) throw ConfigError("out", "expected a string");
    cfg.out = base_dir / doc["out"].get<std::string>();
  }
  return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io, "cannot read config " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  try {
    return parse_run_config(text.str(), path.parent_path());
  } catch (const ConfigError& e) {
    throw ConfigError(path.string(), e.what());
  }
}

}  // namespace casimir::cli
