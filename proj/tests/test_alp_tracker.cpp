#include <doctest.h>

#include <sstream>

#include "acl/alp_tracker.hpp"
#include "acl/errors.hpp"
#include "oracles.hpp"

using namespace acl;

TEST_CASE("empty history gives zero progress") {
  HistoryDb db(2);
  const double q[] = {0.3, 0.4};
  CHECK(compute_alp(q, 100.0, db, RewardSpan{}) == 0.0);
}

TEST_CASE("progress against the single nearest record") {
  HistoryDb db(2);
  const double a[] = {0.1, 0.1}, b[] = {0.9, 0.9};
  db.append(a, 0.0);
  db.append(b, 300.0);
  const double q[] = {0.15, 0.1};
  CHECK(compute_alp(q, 100.0, db, RewardSpan{}) == doctest::Approx(0.2));   // |100-0|/500
  const double r[] = {0.8, 0.85};
  CHECK(compute_alp(r, 50.0, db, RewardSpan{}) == doctest::Approx(0.5));    // |50-300|/500
}

TEST_CASE("rewards outside the span are clamped before differencing") {
  HistoryDb db(1);
  const double a[] = {0.5};
  db.append(a, -1000.0);
  CHECK(compute_alp(a, 5000.0, db, RewardSpan{}) == 1.0);
  CHECK(compute_alp(a, -150.0, db, RewardSpan{}) == 0.0);
}

TEST_CASE("ties go to the earliest record") {
  HistoryDb db(2);
  const double a[] = {0.4, 0.5}, b[] = {0.6, 0.5}, q[] = {0.5, 0.5};
  db.append(a, 10.0);
  db.append(b, 200.0);
  CHECK(db.nearest(q) == 0u);
  CHECK(compute_alp(q, 10.0, db, RewardSpan{}) == 0.0);
  // Same location twice: still the first.
  db.append(a, 99.0);
  CHECK(db.nearest(a) == 0u);
}

TEST_CASE("grid index agrees with a plain scan") {
  for (std::size_t dims : {1u, 2u, 3u, 4u}) {
    RandomStream rng(100 + dims);
    HistoryDb db(dims);
    std::vector<oracle::Rec> ref;
    for (int i = 0; i < 3000; ++i) {
      std::vector<double> p(dims);
      for (auto& v : p) {
        v = rng.uniform();
        // Coarse lattice values make exact ties common.
        if (rng.uniform() < 0.3) v = std::round(v * 8.0) / 8.0;
      }
      if (i % 10 == 0) {
        REQUIRE(db.nearest(p) == oracle::nearest(ref, p));
      }
      const double r = rng.uniform(-200.0, 400.0);
      db.append(p, r);
      ref.push_back({p, r});
    }
  }
}

TEST_CASE("tracker stores raw rewards and counts clamped ones") {
  AlpTracker t(2, 3, RewardSpan{});
  const double a[] = {0.2, 0.2};
  auto e1 = t.record(a, 400.0);
  CHECK(e1.alp_norm == 0.0);
  auto e2 = t.record(a, 100.0);
  CHECK(e2.alp_norm == doctest::Approx(250.0 / 500.0));
  CHECK(t.out_of_span_count() == 1);
  CHECK(t.history()[0].reward == 400.0);
  CHECK(t.history()[1].alp_norm == e2.alp_norm);
  t.record(a, 100.0);
  t.record(a, 0.0);
  CHECK(t.window().size() == 3);
  const auto m = t.window().to_matrix();
  CHECK(m.rows() == 3);
  CHECK(m.cols() == 3);
  // Every record sits at the same point, so the first one (400, clamped to
  // 350) is always the nearest.
  CHECK(m(2, 2) == doctest::Approx(350.0 / 500.0));
  CHECK(t.history().size() == 4);
}

TEST_CASE("window keeps the newest rows in order") {
  AlpWindow w(2);
  w.push({1.0});
  w.push({2.0});
  w.push({3.0});
  CHECK(w.full());
  CHECK(w.rows().front()[0] == 2.0);
  CHECK(w.rows().back()[0] == 3.0);
  CHECK_THROWS_AS(AlpWindow(0), ConfigError);
}

TEST_CASE("history CSV is in raw units") {
  AlpTracker t(2, 10, RewardSpan{});
  const double a[] = {0.5, 0.25};
  t.record(a, 12.5);
  std::ostringstream os;
  write_history_csv(os, t.history(), TaskSpace({0.0, 0.0}, {3.0, 6.0}));
  CHECK(os.str() == "episode,param0,param1,reward,alp_norm\n1,1.5,1.5,12.5,0\n");
}

TEST_CASE("bad spans and dimensions are rejected") {
  CHECK_THROWS_AS((RewardSpan{1.0, 1.0}.validate()), ConfigError);
  HistoryDb db(2);
  const double one[] = {0.5};
  CHECK_THROWS_AS(db.append(one, 0.0), ContractError);
}
