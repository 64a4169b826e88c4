#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace packlab {

struct CriterionResult {
  int id = 0;
  std::string title;
  bool pass = false;
  bool skipped = false;
  std::string detail;
  double seconds = 0.0;
};

/// Runs the acceptance battery, printing one line per criterion to `out` as
/// each finishes. `quick` keeps only the fast criteria (3, 4, 6, 9).
std::vector<CriterionResult> run_acceptance(bool quick, std::ostream& out, std::uint64_t seed = 1);

/// "[PASS] 3 title: detail (1.2 s)"
std::string format_result(const CriterionResult& r);

}  // namespace packlab
