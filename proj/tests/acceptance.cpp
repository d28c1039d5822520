#include <iostream>

#include "nhfermion/verification.hpp"

int main() {
  int failed = 0;
  for (const nhf::CriterionResult& r : nhf::run_acceptance()) {
    std::cout << nhf::format_result(r) << std::endl;
    if (!r.passed) ++failed;
  }
  std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criteria failed")
            << std::endl;
  return failed == 0 ? 0 : 1;
}
