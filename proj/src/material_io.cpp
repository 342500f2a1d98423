#include "casimir/material_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "casimir/error.hpp"

namespace casimir::materials {

namespace {

using nlohmann::json;

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorCode::invalid_model, what); }

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

double parse_number(const std::string& field, const std::string& where) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(field, &used);
  } catch (const std::exception&) {
    bad(where + ": not a number: '" + field + "'");
  }
  if (used != field.size()) bad(where + ": trailing characters in '" + field + "'");
  return v;
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::io, "cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

double number_field(const json& doc, const char* key) {
  if (!doc.contains(key)) bad(std::string("missing field '") + key + "'");
  const json& v = doc.at(key);
  if (!v.is_number()) bad(std::string("field '") + key + "' must be a number");
  return v.get<double>();
}

// Oscillator frequency: a number, or "inf" for a frequency-independent term.
double frequency_value(const json& v) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string() && v.get<std::string>() == "inf") return std::numeric_limits<double>::infinity();
  bad("oscillator frequencies must be numbers or \"inf\"");
}

OscillatorModel parse_oscillator(const json& doc) {
  OscillatorModel m;
  const json c = doc.value("C", json::array());
  const json w = doc.value("omega", json::array());
  if (!c.is_array() || !w.is_array()) bad("'C' and 'omega' must be arrays");
  if (c.size() != w.size()) bad("'C' and 'omega' must have the same length");
  for (std::size_t j = 0; j < c.size(); ++j) {
    if (!c[j].is_number()) bad("'C' entries must be numbers");
    m.strengths.push_back(c[j].get<double>());
    m.frequencies.push_back(frequency_value(w[j]));
  }
  return m;
}

TailModel parse_tail(const json& doc, const char* key, TailModel fallback) {
  if (!doc.contains(key)) return fallback;
  const json& v = doc.at(key);
  if (v.is_number()) return TailModel::power_law(v.get<double>());
  if (v.is_string()) {
    const std::string s = v.get<std::string>();
    if (s == "none") return TailModel::none();
    if (s == "constant") return TailModel::constant();
  }
  if (v.is_object() && v.contains("power_law") && v.at("power_law").is_number()) {
    return TailModel::power_law(v.at("power_law").get<double>());
  }
  bad(std::string("field '") + key + "' must be \"none\", \"constant\" or a power-law exponent");
}

}  // namespace

OpticalDataTable read_optical_csv(const std::filesystem::path& path) {
  std::istringstream in(read_text(path));
  OpticalDataTable table;
  std::string line;
  bool header_seen = false;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    const std::string where = path.filename().string() + ":" + std::to_string(line_no);
    if (!header_seen) {
      std::string header = t;
      header.erase(std::remove(header.begin(), header.end(), ' '), header.end());
      if (header != "omega_rad_s,eps2") bad(where + ": expected header 'omega_rad_s,eps2'");
      header_seen = true;
      continue;
    }
    const auto comma = t.find(',');
    if (comma == std::string::npos || t.find(',', comma + 1) != std::string::npos) {
      bad(where + ": expected two comma-separated fields");
    }
    table.omega.push_back(parse_number(trim(t.substr(0, comma)), where));
    table.eps2.push_back(parse_number(trim(t.substr(comma + 1)), where));
  }
  if (!header_seen) bad(path.filename().string() + ": missing header");
  table.validate();
  return table;
}

PermittivityModel parse_material_json(const std::string& text, const std::filesystem::path& base_dir) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    bad(std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("model") || !doc.at("model").is_string()) {
    bad("material definition needs a string 'model' field");
  }
  const std::string kind = doc.at("model").get<std::string>();
  PermittivityModel model;
  if (kind == "oscillator") {
    model = parse_oscillator(doc);
  } else if (kind == "drude") {
    DrudeModel m;
    m.plasma_frequency = number_field(doc, "omega_p");
    if (doc.contains("nu")) {
      const json& nu = doc.at("nu");
      if (nu.is_number()) {
        m.relaxation.constant = nu.get<double>();
      } else if (nu.is_array()) {
        for (const json& row : nu) {
          if (!row.is_array() || row.size() != 2 || !row[0].is_number() || !row[1].is_number()) {
            bad("'nu' table rows must be [T_K, nu_rad_s]");
          }
          m.relaxation.table.emplace_back(row[0].get<double>(), row[1].get<double>());
        }
      } else {
        bad("'nu' must be a number or a table of [T_K, nu_rad_s] rows");
      }
    }
    model = m;
  } else if (kind == "plasma") {
    model = PlasmaModel{number_field(doc, "omega_p")};
  } else if (kind == "ideal_metal") {
    model = IdealMetal{};
  } else if (kind == "dc_augmented") {
    DcAugmentedModel m;
    m.base = parse_oscillator(doc);
    m.sigma0.sigma_ref = number_field(doc, "sigma0_300K");
    m.sigma0.reference_temperature = 300.0;
    m.sigma0.gap_b = doc.contains("gap_b_K") ? number_field(doc, "gap_b_K") : 0.0;
    model = m;
  } else if (kind == "optical_table") {
    if (!doc.contains("table_path") || !doc.at("table_path").is_string()) bad("missing string 'table_path'");
    std::filesystem::path table_path = doc.at("table_path").get<std::string>();
    if (table_path.is_relative()) table_path = base_dir / table_path;
    OpticalModel m{read_optical_csv(table_path)};
    m.table.low_tail = parse_tail(doc, "low_tail", m.table.low_tail);
    m.table.high_tail = parse_tail(doc, "high_tail", m.table.high_tail);
    model = m;
  } else {
    bad("unknown model '" + kind + "'");
  }
  validate(model);
  return model;
}

PermittivityModel load_material_file(const std::filesystem::path& path) {
  return parse_material_json(read_text(path), path.parent_path());
}

PermittivityModel resolve_material(const std::string& name_or_path, const std::filesystem::path& base_dir) {
  if (auto p = preset(name_or_path)) return *p;
  std::filesystem::path path = name_or_path;
  if (path.is_relative() && !base_dir.empty()) path = base_dir / path;
  if (!std::filesystem::exists(path)) {
    throw Error(ErrorCode::invalid_model, "'" + name_or_path + "' is neither a preset nor a readable file");
  }
  return load_material_file(path);
}

}  // namespace casimir::materials
