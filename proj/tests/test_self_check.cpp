#include <doctest.h>

#include "mrpeval/self_check.hpp"

using namespace mrpeval;

TEST_CASE("self checks pass at unit scale") {
  const auto results = run_self_checks(1, 2024);
  CHECK(results.size() == 7);
  for (const auto& r : results) {
    INFO(r.name << " violations=" << r.violations << " worst=" << r.worst);
    CHECK(r.cases > 0);
    CHECK(r.passed());
  }
}

TEST_CASE("self checks are seed deterministic") {
  const auto a = check_mom_lipschitz(50, 9);
  const auto b = check_mom_lipschitz(50, 9);
  CHECK(a.worst == b.worst);
  CHECK(a.cases == b.cases);
}
