#include "acl/baselines.hpp"

#include "acl/errors.hpp"

namespace acl {

RandomTeacher::RandomTeacher(TaskSpace space, std::uint64_t seed)
    : space_(std::move(space)), rng_(RandomStream(seed).derive("random.propose")) {}

OracleTeacher::OracleTeacher(TaskSpace space, OracleConfig config, std::uint64_t seed)
    : space_(std::move(space)), config_(std::move(config)),
      rng_(RandomStream(seed).derive("oracle.propose")) {
  if (config_.easy_corner.size() != space_.dims() || config_.hard_corner.size() != space_.dims())
    throw ConfigError("oracle corners must match the task-space dimension");
  if (config_.steps == 0 || config_.memory == 0) throw ConfigError("oracle steps and memory must be positive");
  if (!(config_.std_dev >= 0.0)) throw ConfigError("oracle std must be non-negative");
  easy_ = space_.normalize(TaskParams{config_.easy_corner}).values;
  hard_ = space_.normalize(TaskParams{config_.hard_corner}).values;
}

std::vector<double> OracleTeacher::unit_center() const {
  const double t = static_cast<double>(position_) / static_cast<double>(config_.steps);
  std::vector<double> c(easy_.size());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = easy_[i] + t * (hard_[i] - easy_[i]);
  return c;
}

TaskParams OracleTeacher::center() const { return space_.denormalize(TaskParams{unit_center()}); }

std::optional<GmmSnapshot> OracleTeacher::snapshot() const {
  const auto c = unit_center();
  const auto d = static_cast<Eigen::Index>(c.size());
  WeightedGaussian g;
  g.mean = Eigen::Map<const Eigen::VectorXd>(c.data(), d);
  g.covariance = config_.std_dev * config_.std_dev * Eigen::MatrixXd::Identity(d, d);
  return GmmSnapshot{{g}, 0, false};
}

TaskParams OracleTeacher::do_propose() {
  auto c = unit_center();
  for (double& v : c) v += config_.std_dev * rng_.normal();
  return space_.clip(space_.denormalize(TaskParams{std::move(c)}));
}

void OracleTeacher::do_observe(const TaskParams&, double reward) {
  window_.push_back(reward);
  if (window_.size() > config_.memory) window_.pop_front();
  if (window_.size() < config_.memory) return;
  double sum = 0.0;
  for (double r : window_) sum += r;
  if (sum / static_cast<double>(config_.memory) >= config_.reward_threshold) {
    if (position_ < config_.steps) ++position_;
    window_.clear();
  }
}

}  // namespace acl
