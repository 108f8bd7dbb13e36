#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>

#include "acl/alp_tracker.hpp"
#include "acl/curriculum_trace.hpp"
#include "acl/gmm.hpp"
#include "acl/teacher.hpp"

namespace acl {

struct AlpGmmConfig {
  std::size_t fit_rate = 250;  // N: window size and refit period
  int k_max = 10;
  double rho_rnd = 0.10;
  RewardSpan reward_span{};
  // Uniform proposals for the first fit_rate episodes.
  bool bootstrap = true;
  EmOptions em{};

  void validate() const;
  // Stable digest of the hyperparameters, stored in traces.
  std::uint64_t hash() const;
};

// History, window and periodic mixture refits, without any proposal policy.
// Shared by the standalone teacher and the live half of AGAIN.
class AlpGmmCore {
 public:
  // Fits draw from a stream derived from `seed`, which is also stamped on the trace.
  AlpGmmCore(TaskSpace space, AlpGmmConfig config, std::uint64_t seed);

  // Stores the episode in H and W; refits on every fit_rate-th call.
  // Returns true when a refit happened.
  bool record(const TaskParams& raw, double reward);

  // Empty before the first fit.
  std::span<const WeightedGaussian> mixture() const;
  const std::optional<GmmSnapshot>& current() const { return current_; }
  const std::optional<ModelSelection>& last_selection() const { return last_selection_; }

  std::size_t episodes() const { return episodes_; }
  std::size_t fits() const { return fits_; }
  const AlpTracker& tracker() const { return tracker_; }
  const TaskSpace& space() const { return space_; }
  const AlpGmmConfig& config() const { return config_; }
  CurriculumTrace trace() const { return recorder_.trace(); }

 private:
  TaskSpace space_;
  AlpGmmConfig config_;
  RandomStream fit_rng_;
  AlpTracker tracker_;
  TraceRecorder recorder_;
  std::optional<GmmSnapshot> current_;
  std::optional<ModelSelection> last_selection_;
  std::size_t episodes_ = 0;
  std::size_t fits_ = 0;
};

class AlpGmmTeacher final : public Teacher {
 public:
  AlpGmmTeacher(TaskSpace space, AlpGmmConfig config, std::uint64_t seed);

  std::optional<GmmSnapshot> snapshot() const override { return core_.current(); }
  std::string name() const override { return "ALP-GMM"; }

  const AlpGmmCore& core() const { return core_; }
  CurriculumTrace trace() const { return core_.trace(); }
  ProposalOrigin last_origin() const { return last_origin_; }

 protected:
  TaskParams do_propose() override;
  void do_observe(const TaskParams& params, double reward) override;

 private:
  AlpGmmCore core_;
  RandomStream rng_;
  ProposalOrigin last_origin_ = ProposalOrigin::Random;
};

}  // namespace acl
