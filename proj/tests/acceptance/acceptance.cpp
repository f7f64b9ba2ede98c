// One PASS/FAIL line per acceptance criterion; details of failing criteria
// follow the summary. An optional argument selects a single criterion.
#include <cstdlib>
#include <iostream>
#include <string>

#include "dvcv/cli/verify.hpp"

int main(int argc, char** argv) {
  using namespace dvcv::cli;
  const GlobalOptions opts;
  std::vector<Criterion> results;
  try {
    if (argc > 1) {
      results.push_back(run_criterion(std::stoi(argv[1]), opts));
    } else {
      results = run_acceptance(opts);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  bool all = true;
  for (const auto& c : results) {
    std::cout << "criterion " << c.number << ": " << (c.pass() ? "PASS" : "FAIL") << " (" << c.title
              << ")\n";
    all = all && c.pass();
  }
  for (const auto& c : results) {
    if (!c.pass() || argc > 1) std::cout << "\n" << format_report({c});
  }
  return all ? EXIT_SUCCESS : EXIT_FAILURE;
}
