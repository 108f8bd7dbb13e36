#pragma once

#include <cstdint>
#include <deque>
#include <span>
#include <string>
#include <string_view>

#include "acl/curriculum_trace.hpp"
#include "acl/teacher.hpp"

namespace acl {

enum class InVariant { Pool, Time, Reward };

std::string to_string(InVariant v);
InVariant parse_in_variant(std::string_view s);  // "P", "T", "R" or full names

// Replays a filtered curriculum. Pool serves the union of every snapshot;
// Time steps to the next snapshot every `period` episodes; Reward steps once
// the mean of a full `memory`-reward window reaches the snapshot's threshold.
// The index only moves forward and saturates at the last snapshot.
class InferredNiches {
 public:
  InferredNiches(FilteredCurriculum curriculum, InVariant variant, std::size_t period = 250,
                 std::size_t memory = kRewardMemory);

  InVariant variant() const { return variant_; }
  bool empty() const { return curriculum_.empty(); }
  std::size_t size() const { return curriculum_.size(); }
  std::size_t index() const { return index_; }
  std::size_t episodes() const { return episodes_; }
  const FilteredCurriculum& curriculum() const { return curriculum_; }

  // Throws on an empty curriculum.
  const GmmSnapshot& current_mixture() const;
  // Empty span instead of throwing; used by composites.
  std::span<const WeightedGaussian> components() const;

  // Feed one finished episode to the stepping rule.
  void observe(double reward);

  void step_time(std::size_t episode_counter);
  void step_reward(double reward);

 private:
  FilteredCurriculum curriculum_;
  InVariant variant_;
  std::size_t period_;
  std::size_t memory_;
  GmmSnapshot pool_;
  std::size_t index_ = 0;
  std::size_t episodes_ = 0;
  std::deque<double> window_;
};

class InTeacher final : public Teacher {
 public:
  InTeacher(FilteredCurriculum curriculum, InVariant variant, TaskSpace space, std::uint64_t seed,
            std::size_t period = 250, std::size_t memory = kRewardMemory);

  std::optional<GmmSnapshot> snapshot() const override { return niches_.current_mixture(); }
  std::string name() const override { return "IN-" + to_string(niches_.variant()); }
  const InferredNiches& niches() const { return niches_; }

 protected:
  TaskParams do_propose() override;
  void do_observe(const TaskParams& params, double reward) override;

 private:
  InferredNiches niches_;
  TaskSpace space_;
  RandomStream rng_;
};

}  // namespace acl
