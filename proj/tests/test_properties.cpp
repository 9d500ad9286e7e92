#include <doctest.h>

#include "properties.hpp"

TEST_SUITE("properties") {
  TEST_CASE("randomized invariants hold on ten thousand cases each") {
    for (const auto& r : properties::run_all(10000, 20171)) {
      INFO(r.name << ": " << r.first_failure);
      CHECK(r.cases >= 10000);
      CHECK(r.failures == 0);
    }
  }
}
