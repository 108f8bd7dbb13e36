#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "acl/alp_tracker.hpp"
#include "acl/gmm.hpp"
#include "acl/task_space.hpp"

namespace acl {

// Rewards per snapshot that feed its reward threshold.
inline constexpr std::size_t kRewardMemory = 50;

struct TraceMeta {
  std::vector<double> lower;
  std::vector<double> upper;
  RewardSpan reward_span;
  std::uint64_t config_hash = 0;
  std::uint64_t seed = 0;

  std::size_t dims() const { return lower.size(); }
  bool operator==(const TraceMeta&) const = default;
};

// Every mixture fitted during a preliminary run, in fit order, each paired
// with the mean reward the student earned while it was current.
struct CurriculumTrace {
  std::vector<GmmSnapshot> snapshots;
  std::vector<double> reward_means;
  TraceMeta meta;

  std::size_t size() const { return snapshots.size(); }
  // Throws FormatError on unpaired lists, unordered fits or wrong dims.
  void validate() const;
};

// A trace with low-LP arms and then empty snapshots removed.
struct FilteredCurriculum {
  std::vector<GmmSnapshot> snapshots;
  std::vector<double> thresholds;
  TraceMeta meta;

  std::size_t size() const { return snapshots.size(); }
  // An empty curriculum cannot drive IN on its own.
  bool empty() const { return snapshots.empty(); }
  CurriculumTrace as_trace() const { return {snapshots, thresholds, meta}; }
};

FilteredCurriculum filter(const CurriculumTrace& trace, double delta_lp);

// Mean of the last (up to) 50 values. Throws on an empty list.
double record_reward_mean(std::span<const double> rewards);

// Builds a CurriculumTrace online: every reward goes to the ring of the
// snapshot current when it was earned.
class TraceRecorder {
 public:
  explicit TraceRecorder(TraceMeta meta);

  void on_reward(double reward);
  void on_fit(GmmSnapshot snapshot);

  // Snapshot the trace so far, closing the current snapshot's mean.
  CurriculumTrace trace() const;

 private:
  double closing_mean() const;

  CurriculumTrace closed_;
  std::optional<GmmSnapshot> open_;
  // Rewards earned under the open snapshot (or before the first fit).
  std::vector<double> ring_;
  std::vector<double> pre_fit_ring_;
};

// Versioned text encoding. Every double is written as a C99 hex-float so the
// round trip is bit-exact, and a CRC-32 trailer guards against corruption.
std::string serialize_trace(const CurriculumTrace& trace);
// `expected` (if given) must match the trace's bounds.
CurriculumTrace parse_trace(std::string_view text, const TaskSpace* expected = nullptr);

void save_trace(const CurriculumTrace& trace, const std::filesystem::path& path);
CurriculumTrace load_trace(const std::filesystem::path& path, const TaskSpace* expected = nullptr);

}  // namespace acl
