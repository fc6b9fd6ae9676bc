#pragma once

// Checks of the analysis toolkit against reference systems with known answers.

#include <ostream>
#include <string>
#include <vector>

namespace duet::lab {

struct Check {
  enum class Kind { within, at_least, at_most };

  std::string name;
  Kind kind = Kind::within;
  double measured = 0.0;
  double target = 0.0;
  double tolerance = 0.0;  // only for Kind::within
  std::string note;  // error text when the measurement itself failed
  bool error = false;

  bool passed() const;
};

// Runs every check. `force_fail` sets all tolerances to zero, which no
// floating-point estimate survives.
std::vector<Check> run_validation(bool force_fail = false);

// One line per check: status, name, measured, target, tolerance.
void print_checks(std::ostream& out, const std::vector<Check>& checks);

bool all_passed(const std::vector<Check>& checks);

}  // namespace duet::lab
