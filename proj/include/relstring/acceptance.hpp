#ifndef RELSTRING_ACCEPTANCE_HPP
#define RELSTRING_ACCEPTANCE_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace relstring {

struct CriterionResult {
  int id = 0;
  std::string title;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
  double budget_seconds = 0.0;
};

/// Runs the eleven end-to-end acceptance checks; each line of `log` (if
/// given) reports one criterion.
std::vector<CriterionResult> run_acceptance(std::ostream* log = nullptr);

}  // namespace relstring

#endif  // RELSTRING_ACCEPTANCE_HPP
