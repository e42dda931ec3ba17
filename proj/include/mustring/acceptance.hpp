#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mustring {

// One row of the verification battery: what was checked, whether it held,
// how long it took, and the measured numbers behind the verdict.
struct CriterionResult {
  int number = 0;
  std::string name;
  bool pass = false;
  double seconds = 0.0;
  std::string detail;
};

// The twelve checks, run in order, each timed against its stated budget.
// A throw inside one check fails that row and the battery moves on. quick
// shrinks the slow ladders (the overlap log sweep, the slice-change
// classification) to desk scale without touching any tolerance. seed feeds
// the random draws of the algebra checks.
std::vector<CriterionResult> run_acceptance(bool quick, unsigned seed = 1729u);

// One line per criterion: PASS/FAIL, the name, the timing, the numbers.
void print_acceptance(const std::vector<CriterionResult>& rows,
                      std::ostream& out);

bool all_passed(const std::vector<CriterionResult>& rows);

}  // namespace mustring
