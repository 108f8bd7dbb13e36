#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "acl/gmm.hpp"
#include "acl/random.hpp"
#include "acl/task_space.hpp"

namespace acl {

// Uniform plug for every curriculum generator. propose() and observe() must
// alternate, and observe() must receive the params just proposed.
class Teacher {
 public:
  virtual ~Teacher() = default;

  TaskParams propose();
  void observe(const TaskParams& params, double reward);

  // Current fitted mixture, if the teacher has one.
  virtual std::optional<GmmSnapshot> snapshot() const { return std::nullopt; }
  virtual std::string name() const = 0;

  // Non-fatal notes (e.g. a degraded expert curriculum).
  const std::vector<std::string>& diagnostics() const { return diagnostics_; }

 protected:
  virtual TaskParams do_propose() = 0;
  virtual void do_observe(const TaskParams& params, double reward) = 0;

  void note(std::string message) { diagnostics_.push_back(std::move(message)); }

 private:
  std::optional<TaskParams> pending_;
  std::vector<std::string> diagnostics_;
};

// Which sampler produced the last proposal; used for diagnostics and tests.
enum class ProposalOrigin { Random, AlpGmm, Expert };

// Shared proposal step: uniform with probability rho (or when the mixture is
// empty), else LP-proportional arm choice followed by a Gaussian draw.
// Returns the chosen arm index, or nullopt for a uniform draw.
struct MixtureDraw {
  TaskParams params;
  std::optional<std::size_t> component;
};
MixtureDraw propose_from_mixture(std::span<const WeightedGaussian> mixture, double rho,
                                 const TaskSpace& space, RandomStream& rng);

}  // namespace acl
