#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dvcv/cli/csv.hpp"
#include "dvcv/errors.hpp"
#include "dvcv/fock.hpp"

namespace dvcv::cli {

/// Invalid command-line input (exit code 2).
class UsageError : public Error {
 public:
  using Error::Error;
};

/// Options shared by every subcommand.
struct GlobalOptions {
  int nmax = -1;  ///< photon-number cutoff of the analytic sums; -1 picks one per alpha
  double tail_tol = kDefaultTailTolerance;
};

/// Comment lines identifying the tool version and truncation settings.
std::vector<std::string> metadata_lines(const GlobalOptions& opts);

struct SweepSpec {
  std::string protocol = "dual";  ///< dual | single | init_am_dual | init_am_single
  int l = 0;
  int k = 1;
  double alpha_min = 0.1;
  double alpha_max = 1.2;
  int steps = 111;
  std::optional<double> a1_abs;
  std::optional<int> a1_grid;

  /// Throws UsageError on an invalid range or protocol.
  void validate() const;
  /// The |a1| values swept (a single 0 when neither option is given).
  std::vector<double> a1_values() const;
  std::string describe() const;
};

/// One row per (alpha, |a1|) point, alpha slowest. Rows are evaluated on
/// `threads` workers (0 = hardware concurrency) and emitted in grid order.
/// Throws TailMassError when the truncated probability mass exceeds the tail
/// tolerance.
CsvTable run_sweep(const SweepSpec& spec, const GlobalOptions& opts, unsigned threads = 0);

struct FigureBundle {
  std::vector<std::pair<std::string, CsvTable>> tables;  ///< file name, data
  std::string gnuplot;                                   ///< plot script text
};

std::vector<std::string> figure_names();

/// Curve families of fig2 .. fig5. Throws UsageError for unknown names.
FigureBundle make_figure(const std::string& name, const GlobalOptions& opts);

/// Closed-form and partial-transpose negativity of the hybrid channel.
std::string negativity_report(double beta, const GlobalOptions& opts);

struct OracleSpec {
  double alpha = 0.5;
  double r = 0.1;
  int l = 0;
  int k = 1;
  double a0 = 0.6;
  double a1 = 0.8;
  int outcome_max = 2;
};

/// Finite-reflectance simulation against the zeroth-order prediction, one row
/// per (parity, n, m) branch.
CsvTable run_oracle(const OracleSpec& spec, const GlobalOptions& opts);

}  // namespace dvcv::cli
