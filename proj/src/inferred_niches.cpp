#include "acl/inferred_niches.hpp"

#include <algorithm>

#include "acl/errors.hpp"

namespace acl {

std::string to_string(InVariant v) {
  switch (v) {
    case InVariant::Pool: return "P";
    case InVariant::Time: return "T";
    case InVariant::Reward: return "R";
  }
  return "?";
}

InVariant parse_in_variant(std::string_view s) {
  if (s == "P" || s == "Pool" || s == "pool") return InVariant::Pool;
  if (s == "T" || s == "Time" || s == "time") return InVariant::Time;
  if (s == "R" || s == "Reward" || s == "reward") return InVariant::Reward;
  throw ConfigError("unknown IN variant '" + std::string(s) + "'");
}

InferredNiches::InferredNiches(FilteredCurriculum curriculum, InVariant variant,
                               std::size_t period, std::size_t memory)
    : curriculum_(std::move(curriculum)), variant_(variant), period_(period), memory_(memory) {
  if (period_ == 0) throw ConfigError("IN period must be positive");
  if (memory_ == 0) throw ConfigError("IN reward memory must be positive");
  if (curriculum_.snapshots.size() != curriculum_.thresholds.size())
    throw ConfigError("curriculum snapshots and thresholds are unpaired");
  if (variant_ == InVariant::Pool) {
    for (const auto& s : curriculum_.snapshots)
      pool_.components.insert(pool_.components.end(), s.components.begin(), s.components.end());
    // Selection is by LP alone; mixture weights are informational.
    for (auto& g : pool_.components) g.mixture_weight = 1.0 / static_cast<double>(pool_.size());
  }
}

const GmmSnapshot& InferredNiches::current_mixture() const {
  if (empty()) throw ContractError("expert curriculum is empty");
  if (variant_ == InVariant::Pool) return pool_;
  return curriculum_.snapshots[index_];
}

std::span<const WeightedGaussian> InferredNiches::components() const {
  if (empty()) return {};
  return current_mixture().components;
}

void InferredNiches::observe(double reward) {
  ++episodes_;
  switch (variant_) {
    case InVariant::Pool: break;
    case InVariant::Time: step_time(episodes_); break;
    case InVariant::Reward: step_reward(reward); break;
  }
}

void InferredNiches::step_time(std::size_t episode_counter) {
  if (empty()) return;
  const std::size_t target = std::min(episode_counter / period_, size() - 1);
  index_ = std::max(index_, target);
}

void InferredNiches::step_reward(double reward) {
  window_.push_back(reward);
  if (window_.size() > memory_) window_.pop_front();
  if (empty() || window_.size() < memory_) return;
  double sum = 0.0;
  for (double r : window_) sum += r;
  // Matches-or-surpasses; the window restarts under the new snapshot.
  if (sum / static_cast<double>(memory_) >= curriculum_.thresholds[index_]) {
    index_ = std::min(index_ + 1, size() - 1);
    window_.clear();
  }
}

InTeacher::InTeacher(FilteredCurriculum curriculum, InVariant variant, TaskSpace space,
                     std::uint64_t seed, std::size_t period, std::size_t memory)
    : niches_(std::move(curriculum), variant, period, memory),
      space_(std::move(space)),
      rng_(RandomStream(seed).derive("in.propose")) {
  if (niches_.empty()) throw ConfigError("IN teacher needs a non-empty filtered curriculum");
  if (niches_.curriculum().meta.dims() != 0 && niches_.curriculum().meta.dims() != space_.dims())
    throw ConfigError("curriculum dimension does not match the task space");
}

TaskParams InTeacher::do_propose() {
  const auto& mix = niches_.current_mixture().components;
  return sample_task_from(mix[sample_component_by_lp(mix, rng_)], space_, rng_);
}

void InTeacher::do_observe(const TaskParams&, double reward) { niches_.observe(reward); }

}  // namespace acl
