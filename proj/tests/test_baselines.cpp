#include <doctest.h>

#include "acl/baselines.hpp"
#include "acl/errors.hpp"

using namespace acl;

namespace {

const TaskSpace kSpace({0.0, 0.0}, {3.0, 6.0});

OracleConfig oracle() {
  OracleConfig c;
  c.easy_corner = {0.0, 6.0};
  c.hard_corner = {3.0, 0.0};
  return c;
}

}  // namespace

TEST_CASE("random teacher is uniform and seeded") {
  RandomTeacher a(kSpace, 1), b(kSpace, 1);
  int left = 0;
  for (int e = 0; e < 10000; ++e) {
    const auto p = a.propose();
    REQUIRE(p == b.propose());
    REQUIRE(kSpace.contains(p));
    if (p[0] < 1.5) ++left;
    a.observe(p, 0.0);
    b.observe(p, 0.0);
  }
  CHECK(std::abs(left - 5000) < 300);
}

TEST_CASE("oracle never moves for a student below threshold") {
  OracleTeacher t(kSpace, oracle(), 1);
  for (int e = 0; e < 5000; ++e) {
    const auto p = t.propose();
    t.observe(p, 229.99);
  }
  CHECK(t.position() == 0);
  CHECK(t.center() == TaskParams{{0.0, 6.0}});
}

TEST_CASE("oracle reaches the hard corner after 50 x 50 episodes at threshold") {
  OracleTeacher t(kSpace, oracle(), 2);
  for (int e = 1; e <= 2500; ++e) {
    const auto p = t.propose();
    t.observe(p, 230.0);
    REQUIRE(t.position() == static_cast<std::size_t>(e / 50));
  }
  CHECK(t.position() == 50);
  const auto c = t.center();
  CHECK(c[0] == doctest::Approx(3.0));
  CHECK(c[1] == doctest::Approx(0.0));
  for (int e = 0; e < 500; ++e) {
    const auto p = t.propose();
    t.observe(p, 350.0);
  }
  CHECK(t.position() == 50);
}

TEST_CASE("oracle proposals stay near the centre, clipped to bounds") {
  OracleTeacher t(kSpace, oracle(), 3);
  double sx = 0.0;
  for (int e = 0; e < 4000; ++e) {
    const auto p = t.propose();
    REQUIRE(kSpace.contains(p));
    sx += p[0];
    t.observe(p, 0.0);
  }
  // max(0, Z) with Z ~ N(0, 0.15): mean 0.15 / sqrt(2 pi).
  CHECK(sx / 4000 == doctest::Approx(0.15 * 0.3989422804).epsilon(0.05));
}

TEST_CASE("oracle corners must fit the space") {
  auto c = oracle();
  c.hard_corner = {1.0};
  CHECK_THROWS_AS(OracleTeacher(kSpace, c, 0), ConfigError);
}
