#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

#include "casimir/error.hpp"
#include "run_config.hpp"

namespace casimir::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitConvergence = 3;
inline constexpr int kExitIo = 4;

int exit_code(ErrorCode code);

struct RunOptions {
  unsigned threads = 1;        // 0 = hardware concurrency
  std::optional<double> tol;   // overrides the Matsubara tolerance
};

/// Column-ordered result table with trailing summary entries.
struct Table {
  using Cell = std::variant<double, long, std::string>;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  std::vector<std::pair<std::string, Cell>> summary;

  /// CSV: one header line, %.16e numbers, summary as `# key=value` lines.
  void write_csv(std::ostream& out) const;
  void write_json(std::ostream& out) const;
  void write(std::ostream& out, OutputFormat format) const;
};

struct CommandResult {
  Table table;
  int status = kExitOk;
  std::string diagnostic;  // first failure, for stderr
};

CommandResult cmd_compute(const RunConfig& cfg, const RunOptions& opts);
CommandResult cmd_compare_asymptotic(const RunConfig& cfg, const RunOptions& opts);
CommandResult cmd_nernst_check(const RunConfig& cfg, const RunOptions& opts);

/// Weighted least-squares fit S = s0 + s2 tau^2 + s3 tau^3. With five or more
/// points the s0 error also includes the shift seen when the largest tau is
/// dropped.
struct LadderFit {
  double s0 = 0.0;
  double s0_error = 0.0;  // statistical (scaled by sqrt(chi2/dof) when > 1) and systematic
  double s2 = 0.0;
  double s3 = 0.0;
  double chi2 = 0.0;
  double max_residual = 0.0;  // max |S_i - fit_i| / max |S_i|
};
LadderFit fit_entropy_ladder(const std::vector<double>& tau, const std::vector<double>& s,
                             const std::vector<double>& err);

/// Ordinary least-squares slope of ln|y| against ln x.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

std::string format_number(double v);

}  // namespace casimir::cli
