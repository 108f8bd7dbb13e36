#include <doctest.h>

#include <filesystem>

#include "acl/curriculum_trace.hpp"
#include "acl/errors.hpp"
#include "support.hpp"

using namespace acl;
using test_support::gaussian;

namespace {

CurriculumTrace two_snapshot_trace() {
  CurriculumTrace t;
  t.meta.lower = {0.0, 0.0};
  t.meta.upper = {3.0, 6.0};
  GmmSnapshot a, b;
  a.fit_episode = 250;
  a.components = {gaussian({0.1, 0.9, 0.05}, 0.01), gaussian({0.2, 0.8, 0.3}, 0.01)};
  b.fit_episode = 500;
  b.components = {gaussian({0.5, 0.5, 0.02}, 0.01)};
  t.snapshots = {a, b};
  t.reward_means = {120.0, 180.0};
  return t;
}

}  // namespace

TEST_CASE("filter drops low-progress arms and then empty snapshots") {
  const auto f = filter(two_snapshot_trace(), 0.1);
  REQUIRE(f.size() == 1);
  CHECK(f.snapshots[0].size() == 1);
  CHECK(f.snapshots[0].components[0].lp() == doctest::Approx(0.3));
  CHECK(f.thresholds == std::vector<double>{120.0});
  CHECK(f.snapshots[0].fit_episode == 250);
}

TEST_CASE("filter keeps arms exactly at the cut and is idempotent") {
  auto t = two_snapshot_trace();
  t.snapshots[1].components[0].mean[2] = 0.1;
  const auto f = filter(t, 0.1);
  REQUIRE(f.size() == 2);
  const auto g = filter(f.as_trace(), 0.1);
  CHECK(serialize_trace(g.as_trace()) == serialize_trace(f.as_trace()));
  CHECK(filter(t, 0.0).size() == 2);
  CHECK(filter(t, 1.0).empty());
}

TEST_CASE("reward mean uses the last fifty values") {
  std::vector<double> r(80);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = static_cast<double>(i);
  CHECK(record_reward_mean(r) == doctest::Approx((30.0 + 79.0) / 2.0));
  const double three[] = {1.0, 2.0, 6.0};
  CHECK(record_reward_mean(three) == 3.0);
  CHECK_THROWS_AS(record_reward_mean(std::span<const double>{}), ContractError);
}

TEST_CASE("recorder pairs each snapshot with rewards earned under it") {
  TraceRecorder rec(TraceMeta{{0.0}, {1.0}, RewardSpan{}, 0, 0});
  for (int i = 0; i < 10; ++i) rec.on_reward(-10.0);  // before any fit
  GmmSnapshot s1;
  s1.fit_episode = 10;
  s1.components = {gaussian({0.5, 0.2}, 0.01)};
  rec.on_fit(s1);
  for (int i = 0; i < 60; ++i) rec.on_reward(i < 10 ? 0.0 : 100.0);
  auto s2 = s1;
  s2.fit_episode = 70;
  rec.on_fit(s2);
  const auto mid = rec.trace();
  REQUIRE(mid.size() == 2);
  CHECK(mid.reward_means[0] == 100.0);
  // s2 has served nothing yet: it inherits the previous threshold.
  CHECK(mid.reward_means[1] == 100.0);
  rec.on_reward(40.0);
  CHECK(rec.trace().reward_means[1] == 40.0);
}

TEST_CASE("save, load, save is byte-identical") {
  RandomStream rng(5);
  const auto dir = std::filesystem::temp_directory_path() / "acl_trace_test";
  std::filesystem::create_directories(dir);
  for (int i = 0; i < 20; ++i) {
    const auto t = test_support::random_trace(rng, 1 + i % 3);
    const auto path = dir / ("t" + std::to_string(i) + ".trace");
    save_trace(t, path);
    const auto back = load_trace(path);
    CHECK(serialize_trace(back) == serialize_trace(t));
    REQUIRE(back.size() == t.size());
    for (std::size_t s = 0; s < t.size(); ++s) {
      CHECK(back.reward_means[s] == t.reward_means[s]);
      for (std::size_t c = 0; c < t.snapshots[s].size(); ++c) {
        CHECK(back.snapshots[s].components[c].mean == t.snapshots[s].components[c].mean);
        CHECK(back.snapshots[s].components[c].covariance == t.snapshots[s].components[c].covariance);
      }
    }
    CHECK(back.meta == t.meta);
  }
  std::filesystem::remove_all(dir);
}

TEST_CASE("corrupted or mismatched traces are refused") {
  const auto text = serialize_trace(two_snapshot_trace());
  CHECK_NOTHROW(parse_trace(text));

  auto flipped = text;
  flipped[flipped.find("snapshot 250") + 9] = '3';
  CHECK_THROWS_WITH_AS(parse_trace(flipped), doctest::Contains("checksum"), FormatError);

  auto version = text;
  version.replace(version.find("v1"), 2, "v9");
  CHECK_THROWS_WITH_AS(parse_trace(version), doctest::Contains("version"), FormatError);

  CHECK_THROWS_AS(parse_trace("hello\n"), FormatError);
  CHECK_THROWS_AS(parse_trace(text.substr(0, text.size() / 2)), FormatError);

  const TaskSpace three({0.0, 0.0, 0.0}, {1.0, 1.0, 1.0});
  CHECK_THROWS_WITH_AS(parse_trace(text, &three), doctest::Contains("dims"), FormatError);
  const TaskSpace other({0.0, 0.0}, {3.0, 5.0});
  CHECK_THROWS_AS(parse_trace(text, &other), FormatError);
  const TaskSpace same({0.0, 0.0}, {3.0, 6.0});
  CHECK_NOTHROW(parse_trace(text, &same));
}

TEST_CASE("unpaired traces fail validation") {
  auto t = two_snapshot_trace();
  t.reward_means.pop_back();
  CHECK_THROWS_AS(t.validate(), FormatError);
  CHECK_THROWS_AS(serialize_trace(t), FormatError);
}
