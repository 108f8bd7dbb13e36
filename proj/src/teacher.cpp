#include "acl/teacher.hpp"

#include "acl/errors.hpp"

namespace acl {

TaskParams Teacher::propose() {
  if (pending_) throw ContractError(name() + ": propose() called twice without observe()");
  pending_ = do_propose();
  return *pending_;
}

void Teacher::observe(const TaskParams& params, double reward) {
  if (!pending_) throw ContractError(name() + ": observe() without a pending proposal");
  if (params != *pending_)
    throw ContractError(name() + ": observe() params differ from the last proposal");
  pending_.reset();
  do_observe(params, reward);
}

MixtureDraw propose_from_mixture(std::span<const WeightedGaussian> mixture, double rho,
                                 const TaskSpace& space, RandomStream& rng) {
  const double u = rng.uniform();
  if (u < rho || mixture.empty()) return {space.sample_uniform(rng), std::nullopt};
  const std::size_t c = sample_component_by_lp(mixture, rng);
  return {sample_task_from(mixture[c], space, rng), c};
}

}  // namespace acl
