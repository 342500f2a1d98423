#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "casimir/lifshitz.hpp"
#include "casimir/materials.hpp"

namespace casimir::cli {

enum class OutputFormat { csv, json };

struct Sweep {
  enum class Variable { temperature, separation };
  enum class Spacing { linear, log };
  Variable variable = Variable::temperature;
  double from = 0.0;
  double to = 0.0;
  int points = 2;
  Spacing spacing = Spacing::linear;

  std::vector<double> values() const;
};

/// Parsed run description. Separations and temperatures span a grid in
/// (a outer, T inner) order; a sweep replaces the list of its variable.
struct RunConfig {
  std::string material_1_name;
  std::string material_2_name;
  materials::PermittivityModel material_1;
  materials::PermittivityModel material_2;
  std::vector<double> separations;   // metres
  std::vector<double> temperatures;  // kelvin
  std::optional<Sweep> sweep;
  std::vector<double> ladder = {8.0, 4.0, 2.0, 1.0, 0.5};  // nernst-check
  std::optional<lifshitz::NumericalSettings> numerics;     // unset: command default
  OutputFormat format = OutputFormat::csv;
  std::optional<std::filesystem::path> out;

  struct Point {
    double separation;
    double temperature;
  };
  std::vector<Point> grid() const;
};

/// Thrown for malformed configs; `field` names the offending key.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& field, const std::string& what)
      : std::runtime_error(field.empty() ? what : field + ": " + what) {}
};

/// Materials in the document are preset names, paths relative to `base_dir`
/// or inline definitions.
RunConfig parse_run_config(const std::string& text, const std::filesystem::path& base_dir = {});
RunConfig load_run_config(const std::filesystem::path& path);

OutputFormat parse_format(const std::string& name);

}  // namespace casimir::cli
