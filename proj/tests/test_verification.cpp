#include "doctest.h"
#include "nhfermion/verification.hpp"

using namespace nhf;

TEST_CASE("parametrized checks pass at documented settings") {
  CHECK(check_spectrum({0.6}, 60, 5, 1e-8).passed);
  CHECK(check_metric(0.2, 40, 1e-8).passed);
  CHECK_FALSE(check_metric(0.6, 40, 1e-8).passed);
  CHECK(check_fock(0.6, 5, 1e-10).passed);
}

TEST_CASE("checks fail when the tolerance is out of reach") {
  const CriterionResult r = check_spectrum({1.5}, 12, 6, 1e-12);
  CHECK_FALSE(r.passed);
  CHECK(r.measured > 1e-12);
}

TEST_CASE("result formatting") {
  CriterionResult r;
  r.id = 4;
  r.title = "demo";
  r.passed = true;
  r.measured = 1e-12;
  r.threshold = 1e-10;
  CHECK(format_result(r).rfind("PASS criterion 4: demo", 0) == 0);
  r.passed = false;
  CHECK(format_result(r).rfind("FAIL criterion 4", 0) == 0);
}

TEST_CASE("criteria are listed in order") {
  const auto list = acceptance_criteria();
  REQUIRE(list.size() == 10);
  for (std::size_t i = 0; i < list.size(); ++i) CHECK(list[i].id == static_cast<int>(i) + 1);
}
