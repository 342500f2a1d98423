// casimir: thermal Casimir free energy, pressure and entropy between plates.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "casimir/material_io.hpp"
#include "casimir/materials.hpp"
#include "commands.hpp"

using namespace casimir;
using namespace casimir::cli;

namespace {

struct Common {
  std::string config;
  std::string out;
  std::string format;
  unsigned threads = 1;
  double tol = 0.0;
};

int emit(const CommandResult& result, const RunConfig& cfg, const Common& common) {
  const auto format = common.format.empty() ? cfg.format : parse_format(common.format);
  std::ostringstream text;
  result.table.write(text, format);

  std::optional<std::filesystem::path> path;
  if (!common.out.empty()) path = common.out;
  else if (cfg.out) path = cfg.out;
  if (path) {
    std::ofstream file(*path, std::ios::binary);
    if (!file || !(file << text.str()) || !file.flush()) {
      std::cerr << "io-error: cannot write " << path->string() << '\n';
      return kExitIo;
    }
  } else {
    std::cout << text.str() << std::flush;
  }
  if (!result.diagnostic.empty()) std::cerr << result.diagnostic << '\n';
  return result.status;
}

template <class Command>
int run(Command command, const Common& common) {
  const auto cfg = load_run_config(common.config);
  RunOptions opts;
  opts.threads = common.threads;
  if (common.tol > 0.0) opts.tol = common.tol;
  return emit(command(cfg, opts), cfg, common);
}

int validate_material(const std::string& file) {
  const auto model = materials::load_material_file(file);
  materials::validate(model);
  std::cout << "model: " << materials::to_string(materials::classify(model)) << '\n';
  if (const auto eps0 = materials::static_eps(model)) std::cout << "static_eps: " << format_number(*eps0) << '\n';
  else std::cout << "static_eps: divergent\n";
  std::cout << "temperature_dependent: " << (materials::is_temperature_dependent(model) ? "yes" : "no") << '\n';
  std::cout << "ok\n";
  return kExitOk;
}

int print_eps(const std::string& name, double xi, std::optional<double> temperature) {
  const auto model = materials::resolve_material(name, std::filesystem::current_path());
  std::cout << format_number(materials::eval_eps(model, xi, temperature)) << '\n';
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Thermal Casimir interaction between two parallel plates"};
  app.require_subcommand(1);
  app.fallthrough();

  Common common;
  app.add_option("--out", common.out, "Output file (default: stdout or the config's \"out\")");
  app.add_option("--format", common.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--threads", common.threads, "Worker threads (0 = all cores)");
  app.add_option("--tol", common.tol, "Relative tolerance of the Matsubara sum")->check(CLI::PositiveNumber);

  auto* compute = app.add_subcommand("compute", "Free energy, pressure and entropy on a grid");
  auto* compare = app.add_subcommand("compare-asymptotic", "Exact thermal corrections against low-tau asymptotics");
  auto* nernst = app.add_subcommand("nernst-check", "Extrapolate the entropy to T = 0");
  for (auto* sub : {compute, compare, nernst}) {
    sub->add_option("--config", common.config, "Run configuration (JSON)")->required();
  }

  auto* mats = app.add_subcommand("materials", "Material definition utilities");
  mats->require_subcommand(1);
  std::string material_file;
  auto* validate = mats->add_subcommand("validate", "Check a material definition file");
  validate->add_option("file", material_file)->required();

  auto* eps = app.add_subcommand("eps", "Permittivity on the imaginary axis");
  std::string material;
  double xi = 0.0;
  std::optional<double> temperature;
  eps->add_option("--material", material, "Preset name or material file")->required();
  eps->add_option("--xi", xi, "Imaginary frequency, rad/s")->required();
  eps->add_option("--T", temperature, "Temperature, K");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (*compute) return run(cmd_compute, common);
    if (*compare) return run(cmd_compare_asymptotic, common);
    if (*nernst) return run(cmd_nernst_check, common);
    if (*validate) return validate_material(material_file);
    if (*eps) return print_eps(material, xi, temperature);
  } catch (const ConfigError& e) {
    std::cerr << "config-error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const Error& e) {
    std::cerr << e.what() << '\n';
    return exit_code(e.code());
  }
  return kExitConfig;
}
