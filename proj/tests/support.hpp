#pragma once

// Shared fixtures for the unit and acceptance tests.

#include <Eigen/Dense>
#include <vector>

#include "acl/curriculum_trace.hpp"
#include "acl/gmm.hpp"
#include "acl/random.hpp"

namespace test_support {

struct Clusters {
  Eigen::MatrixXd points;
  std::vector<Eigen::VectorXd> means;
};

// Three isotropic clusters (std 0.03) at well-separated points of [0,1]^3.
inline Clusters three_clusters(acl::RandomStream& rng, int n) {
  Clusters c;
  c.means = {Eigen::Vector3d(0.2, 0.2, 0.2), Eigen::Vector3d(0.8, 0.3, 0.6),
             Eigen::Vector3d(0.4, 0.8, 0.85)};
  c.points.resize(n, 3);
  for (int i = 0; i < n; ++i) {
    const auto& mu = c.means[static_cast<std::size_t>(i % 3)];
    for (int d = 0; d < 3; ++d) c.points(i, d) = mu[d] + 0.03 * rng.normal();
  }
  return c;
}

inline acl::WeightedGaussian gaussian(std::vector<double> mean, double var) {
  acl::WeightedGaussian g;
  g.mean = Eigen::Map<Eigen::VectorXd>(mean.data(), static_cast<Eigen::Index>(mean.size()));
  g.covariance = Eigen::MatrixXd::Identity(g.mean.size(), g.mean.size()) * var;
  return g;
}

// A random trace over d parameter dimensions with awkward doubles.
inline acl::CurriculumTrace random_trace(acl::RandomStream& rng, std::size_t d = 2) {
  acl::CurriculumTrace t;
  t.meta.lower.assign(d, 0.0);
  t.meta.upper.assign(d, 1.0);
  if (d >= 2) {
    t.meta.upper[0] = 3.0;
    t.meta.upper[1] = 6.0;
  }
  t.meta.config_hash = rng.next_u64();
  t.meta.seed = rng.next_u64();
  const std::size_t n = rng.index(12);
  std::int64_t ep = 0;
  for (std::size_t s = 0; s < n; ++s) {
    acl::GmmSnapshot snap;
    ep += 250;
    snap.fit_episode = ep;
    const std::size_t k = 1 + rng.index(6);
    for (std::size_t c = 0; c < k; ++c) {
      acl::WeightedGaussian g;
      g.mean.resize(static_cast<Eigen::Index>(d + 1));
      for (std::size_t i = 0; i <= d; ++i) g.mean[static_cast<Eigen::Index>(i)] = rng.uniform();
      g.mean[static_cast<Eigen::Index>(d)] = rng.uniform() * 0.3;  // lp
      Eigen::MatrixXd a = Eigen::MatrixXd::Random(static_cast<Eigen::Index>(d + 1),
                                                  static_cast<Eigen::Index>(d + 1));
      for (Eigen::Index i = 0; i < a.size(); ++i) a.data()[i] = rng.uniform(-0.3, 0.3);
      g.covariance = a * a.transpose() + Eigen::MatrixXd::Identity(a.rows(), a.rows()) * 1e-6;
      g.mixture_weight = rng.uniform() / static_cast<double>(k);
      snap.components.push_back(g);
    }
    t.snapshots.push_back(snap);
    t.reward_means.push_back(rng.uniform(-150.0, 350.0));
  }
  return t;
}

}  // namespace test_support
