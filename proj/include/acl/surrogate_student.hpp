#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "acl/alp_tracker.hpp"
#include "acl/random.hpp"
#include "acl/student.hpp"

namespace acl {

// Constants of a surrogate learner. Coordinates are normalized: dimension 0
// is difficulty (stump height), dimension 1 eases it (stump spacing).
struct SurrogateProfile {
  std::string name = "strong";
  // A cell is learnable iff x0 <= mask_base + mask_slope * x1.
  double mask_base = 0.30;
  double mask_slope = 0.50;
  std::size_t grid = 50;  // cells per dimension
  // Prerequisite reach along dimension 0, as a fraction of the range. Cells
  // with x0 below it need no prerequisite.
  double frontier_width = 0.06;
  // A cell trains while its prerequisite region is at least frontier_width
  // ahead of it, or already at this level.
  double prerequisite_level = 0.8;
  double learn_rate = 0.2;
  double kernel_sigma = 1.5;  // in cells
  // Plasticity is 1 / (1 + infeasible_episodes / clutter_scale).
  double clutter_scale = 30.0;
  double noise_fraction = 0.01;  // reward noise std as a fraction of the span
  RewardSpan span{};

  static SurrogateProfile strong();
  static SurrogateProfile weak();
  static SurrogateProfile by_name(std::string_view name);
};

// Competence-field learner standing in for a deep RL agent. Competence only
// grows, only on learnable cells, and only where easier neighbouring cells
// are already competent, so progress is a moving frontier.
class SurrogateStudent final : public Student {
 public:
  SurrogateStudent(TaskSpace space, SurrogateProfile profile, std::uint64_t seed);

  double evaluate(const TaskParams& params) override;
  double train_on(const TaskParams& params) override;
  void reset(ResetMode mode) override;

  double evaluate_pure(const TaskParams& params) const;

  bool learnable(const TaskParams& params) const;
  double competence_at(const TaskParams& params) const;
  double plasticity() const;
  std::size_t infeasible_episodes() const { return infeasible_; }
  const std::vector<double>& competence() const { return competence_; }
  const SurrogateProfile& profile() const { return profile_; }
  const TaskSpace& space() const { return space_; }

  // Mean competence over learnable cells satisfying `region` (normalized
  // cell centres); NaN if none match.
  double mean_competence(const std::function<bool(const std::vector<double>&)>& region) const;

 private:
  std::vector<std::size_t> cell_coords(const TaskParams& raw) const;
  std::size_t flat(const std::vector<std::size_t>& coords) const;
  std::vector<double> cell_center(std::size_t flat_index) const;
  bool cell_learnable(const std::vector<std::size_t>& coords) const;
  bool in_frontier(const std::vector<std::size_t>& coords) const;
  double reward_for(double competence, bool learnable_task, double noise) const;

  TaskSpace space_;
  SurrogateProfile profile_;
  std::uint64_t seed_;
  std::size_t dims_;
  std::size_t reach_cells_;
  std::vector<double> competence_;
  std::vector<char> mask_;
  RandomStream rng_;
  std::size_t infeasible_ = 0;
};

}  // namespace acl
