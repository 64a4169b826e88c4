#include "packlab/acceptance.hpp"

#include <algorithm>
#include <cstring>
#include <iostream>

int main(int argc, char** argv) {
  const bool quick = argc > 1 && std::strcmp(argv[1], "--quick") == 0;
  const auto results = packlab::run_acceptance(quick, std::cout);
  const auto failed = std::count_if(results.begin(), results.end(), [](const auto& r) { return !r.skipped && !r.pass; });
  std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criteria failed") << std::endl;
  return failed == 0 ? 0 : 1;
}
