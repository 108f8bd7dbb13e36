#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "acl/random.hpp"
#include "acl/task_space.hpp"

namespace acl {

// One Gaussian arm over the joint (normalized params, normalized ALP) space.
// The last mean coordinate is the arm's learning-progress utility.
struct WeightedGaussian {
  Eigen::VectorXd mean;
  Eigen::MatrixXd covariance;
  double mixture_weight = 1.0;

  double lp() const { return mean[mean.size() - 1]; }
  Eigen::Index dims() const { return mean.size(); }
};

struct GmmSnapshot {
  std::vector<WeightedGaussian> components;
  std::int64_t fit_episode = 0;
  // Set when EM saw identical points and collapsed to one component.
  bool degenerate = false;

  std::size_t size() const { return components.size(); }
  bool empty() const { return components.empty(); }
};

inline constexpr double kCovarianceFloor = 1e-6;

struct EmOptions {
  int max_iterations = 100;
  // Stop once the log-likelihood gain per point drops below this.
  double tolerance_per_point = 1e-3;
  double covariance_floor = kCovarianceFloor;
};

struct EmResult {
  GmmSnapshot model;
  // Data log-likelihood before each M-step, plus the final one.
  std::vector<double> log_likelihood_trace;
  int iterations = 0;
  bool converged = false;

  double log_likelihood() const { return log_likelihood_trace.back(); }
};

// Rows of `points` are samples. Full covariances, k-means++ seeding.
EmResult fit_em(const Eigen::MatrixXd& points, int k, RandomStream& rng,
                const EmOptions& options = {});

double log_likelihood(const GmmSnapshot& model, const Eigen::MatrixXd& points);

// k * (D + D(D+1)/2) + (k - 1) free parameters for a full-covariance mixture.
std::size_t parameter_count(std::size_t k, std::size_t dim);

double aic(const GmmSnapshot& model, const Eigen::MatrixXd& points);

struct ModelSelection {
  std::vector<EmResult> candidates;  // in increasing k
  std::vector<double> aic;           // paired with candidates
  std::size_t best = 0;

  const EmResult& best_fit() const { return candidates[best]; }
  const GmmSnapshot& model() const { return candidates[best].model; }
};

// Fits k = 2..k_max (skipping k > |points|) and keeps the lowest-AIC mixture.
// Each k draws from its own child stream so the result depends only on
// (points, rng seed).
ModelSelection select_best_k(const Eigen::MatrixXd& points, int k_max, RandomStream& rng,
                             const EmOptions& options = {});

// Picks index c with probability lp_c / sum(lp); uniform when every lp is 0.
// Negative lp counts as 0.
std::size_t sample_component_by_lp(std::span<const WeightedGaussian> mixture,
                                   RandomStream& rng);

// Draws from the parameter marginal (ALP coordinate dropped), maps back to
// raw space and clips to bounds.
TaskParams sample_task_from(const WeightedGaussian& g, const TaskSpace& space,
                            RandomStream& rng);

}  // namespace acl
