#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "acl/alp_gmm.hpp"
#include "acl/inferred_niches.hpp"

namespace acl {

struct AgainConfig {
  InVariant in_variant = InVariant::Reward;
  double rho_low = 0.02;
  // Live teacher settings; bootstrap and rho_rnd are ignored here.
  AlpGmmConfig alpgmm{};
  std::size_t in_period = 250;
  std::size_t in_memory = kRewardMemory;

  void validate() const;
};

// Second-run teacher: every episode samples an arm from the union of the live
// low-exploration ALP-GMM mixture and the current expert (IN) mixture, by LP.
class AgainTeacher final : public Teacher {
 public:
  AgainTeacher(FilteredCurriculum curriculum, AgainConfig config, TaskSpace space,
               std::uint64_t seed);

  // Live ALP-GMM arms first, then the expert arms; LPs are carried unchanged.
  std::vector<WeightedGaussian> composite_mixture() const;

  std::optional<GmmSnapshot> snapshot() const override;
  std::string name() const override { return "AGAIN-" + to_string(config_.in_variant); }

  const AlpGmmCore& alpgmm() const { return core_; }
  const InferredNiches& niches() const { return niches_; }
  ProposalOrigin last_origin() const { return last_origin_; }

 protected:
  TaskParams do_propose() override;
  void do_observe(const TaskParams& params, double reward) override;

 private:
  AgainConfig config_;
  TaskSpace space_;
  AlpGmmCore core_;
  InferredNiches niches_;
  RandomStream rng_;
  ProposalOrigin last_origin_ = ProposalOrigin::Random;
};

}  // namespace acl
