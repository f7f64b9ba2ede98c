#pragma once

#include <string>
#include <vector>

#include "dvcv/cli/commands.hpp"

namespace dvcv::cli {

/// One verified claim: computed value against a reference with a tolerance.
struct Check {
  std::string claim;
  double computed = 0.0;
  double expected = 0.0;
  double tolerance = 0.0;
  /// "abs" for |computed - expected| <= tolerance, otherwise "<=", ">" or "property".
  std::string relation = "abs";
  bool pass = false;
  std::string note;  ///< free-form detail, may span several lines
};

/// |computed - expected| <= tolerance
Check make_check(std::string claim, double computed, double expected, double tolerance,
                 std::string note = {});
/// Boolean property; computed/expected hold 1 or 0.
Check make_property(std::string claim, bool holds, std::string note = {});
/// computed <= bound
Check make_at_most(std::string claim, double computed, double bound, std::string note = {});
/// computed > bound
Check make_above(std::string claim, double computed, double bound, std::string note = {});

struct Criterion {
  int number = 0;
  std::string title;
  std::vector<Check> checks;
  double seconds = 0.0;

  bool pass() const;
};

/// Evaluates a single acceptance criterion (1..10); 11 and 12 are the extra
/// figure/sweep and demodulation property groups used by the CLI suites.
Criterion run_criterion(int number, const GlobalOptions& opts);

std::vector<Criterion> run_acceptance(const GlobalOptions& opts);

std::vector<std::string> suite_names();

/// paper | properties | oracle | all. Throws UsageError for unknown names.
std::vector<Criterion> run_suite(const std::string& suite, const GlobalOptions& opts);

/// Human-readable listing of every check plus a summary line.
std::string format_report(const std::vector<Criterion>& criteria);

}  // namespace dvcv::cli
