#include "acl/again.hpp"

#include "acl/errors.hpp"

namespace acl {
namespace {

AlpGmmConfig live_config(AlpGmmConfig c, double rho_low) {
  c.bootstrap = false;
  c.rho_rnd = rho_low;
  return c;
}

}  // namespace

void AgainConfig::validate() const {
  if (!(rho_low >= 0.0 && rho_low <= 1.0)) throw ConfigError("rho_low must lie in [0,1]");
  live_config(alpgmm, rho_low).validate();
}

AgainTeacher::AgainTeacher(FilteredCurriculum curriculum, AgainConfig config, TaskSpace space,
                           std::uint64_t seed)
    : config_(config),
      space_(space),
      core_(space, live_config(config.alpgmm, config.rho_low), seed),
      niches_(std::move(curriculum), config.in_variant, config.in_period, config.in_memory),
      // Same stream as a standalone ALP-GMM with this seed, so an empty expert
      // curriculum reproduces that teacher draw for draw.
      rng_(RandomStream(seed).derive("alpgmm.propose")) {
  config_.validate();
  if (niches_.empty()) note("expert curriculum is empty; AGAIN falls back to ALP-GMM alone");
}

std::vector<WeightedGaussian> AgainTeacher::composite_mixture() const {
  const auto live = core_.mixture();
  const auto expert = niches_.components();
  std::vector<WeightedGaussian> out;
  out.reserve(live.size() + expert.size());
  out.insert(out.end(), live.begin(), live.end());
  out.insert(out.end(), expert.begin(), expert.end());
  return out;
}

std::optional<GmmSnapshot> AgainTeacher::snapshot() const {
  auto mix = composite_mixture();
  if (mix.empty()) return std::nullopt;
  GmmSnapshot s;
  s.components = std::move(mix);
  s.fit_episode = static_cast<std::int64_t>(core_.episodes());
  return s;
}

TaskParams AgainTeacher::do_propose() {
  const auto mix = composite_mixture();
  auto draw = propose_from_mixture(mix, config_.rho_low, space_, rng_);
  if (!draw.component)
    last_origin_ = ProposalOrigin::Random;
  else
    last_origin_ = *draw.component < core_.mixture().size() ? ProposalOrigin::AlpGmm
                                                            : ProposalOrigin::Expert;
  return std::move(draw.params);
}

void AgainTeacher::do_observe(const TaskParams& params, double reward) {
  core_.record(params, reward);
  niches_.observe(reward);
}

}  // namespace acl
