#include "acl/alp_gmm.hpp"

#include <cstdio>

#include <boost/crc.hpp>

#include "acl/errors.hpp"

namespace acl {

void AlpGmmConfig::validate() const {
  if (k_max < 2) throw ConfigError("k_max must be >= 2");
  if (fit_rate < static_cast<std::size_t>(k_max)) throw ConfigError("fit rate N must be >= k_max");
  if (!(rho_rnd >= 0.0 && rho_rnd <= 1.0)) throw ConfigError("rho_rnd must lie in [0,1]");
  reward_span.validate();
}

std::uint64_t AlpGmmConfig::hash() const {
  char buf[256];
  const int n = std::snprintf(buf, sizeof buf, "N=%zu;kmax=%d;rho=%a;span=%a,%a;boot=%d;em=%d,%a,%a",
                              fit_rate, k_max, rho_rnd, reward_span.min, reward_span.max,
                              bootstrap ? 1 : 0, em.max_iterations, em.tolerance_per_point,
                              em.covariance_floor);
  boost::crc_32_type lo;
  lo.process_bytes(buf, static_cast<std::size_t>(n));
  boost::crc_optimal<32, 0x1EDC6F41, 0xFFFFFFFF, 0xFFFFFFFF, true, true> hi;  // CRC-32C
  hi.process_bytes(buf, static_cast<std::size_t>(n));
  return (static_cast<std::uint64_t>(hi.checksum()) << 32) | lo.checksum();
}

AlpGmmCore::AlpGmmCore(TaskSpace space, AlpGmmConfig config, std::uint64_t seed)
    : space_(std::move(space)),
      config_(config),
      fit_rng_(RandomStream(seed).derive("alpgmm.fit")),
      tracker_(space_.dims(), config.fit_rate, config.reward_span),
      recorder_(TraceMeta{space_.lower(), space_.upper(), config.reward_span, config.hash(), seed}) {
  config_.validate();
}

std::span<const WeightedGaussian> AlpGmmCore::mixture() const {
  if (!current_) return {};
  return current_->components;
}

bool AlpGmmCore::record(const TaskParams& raw, double reward) {
  recorder_.on_reward(reward);
  const TaskParams unit = space_.normalize(raw);
  tracker_.record(unit.values, reward);
  ++episodes_;
  if (episodes_ % config_.fit_rate != 0) return false;

  ModelSelection sel = select_best_k(tracker_.window().to_matrix(), config_.k_max, fit_rng_, config_.em);
  GmmSnapshot snap = sel.model();
  snap.fit_episode = static_cast<std::int64_t>(episodes_);
  recorder_.on_fit(snap);
  current_ = std::move(snap);
  last_selection_ = std::move(sel);
  ++fits_;
  return true;
}

AlpGmmTeacher::AlpGmmTeacher(TaskSpace space, AlpGmmConfig config, std::uint64_t seed)
    : core_(std::move(space), config, seed),
      rng_(RandomStream(seed).derive("alpgmm.propose")) {}

TaskParams AlpGmmTeacher::do_propose() {
  const auto& cfg = core_.config();
  if (cfg.bootstrap && core_.episodes() < cfg.fit_rate) {
    last_origin_ = ProposalOrigin::Random;
    return core_.space().sample_uniform(rng_);
  }
  auto draw = propose_from_mixture(core_.mixture(), cfg.rho_rnd, core_.space(), rng_);
  last_origin_ = draw.component ? ProposalOrigin::AlpGmm : ProposalOrigin::Random;
  return std::move(draw.params);
}

void AlpGmmTeacher::do_observe(const TaskParams& params, double reward) {
  core_.record(params, reward);
}

}  // namespace acl
