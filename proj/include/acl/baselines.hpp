#pragma once

#include <cstdint>
#include <deque>
#include <string>
#include <vector>

#include "acl/teacher.hpp"

namespace acl {

class RandomTeacher final : public Teacher {
 public:
  RandomTeacher(TaskSpace space, std::uint64_t seed);
  std::string name() const override { return "Random"; }

 protected:
  TaskParams do_propose() override { return space_.sample_uniform(rng_); }
  void do_observe(const TaskParams&, double) override {}

 private:
  TaskSpace space_;
  RandomStream rng_;
};

struct OracleConfig {
  // Raw task params of the simplest and hardest corners.
  std::vector<double> easy_corner;
  std::vector<double> hard_corner;
  std::size_t steps = 50;
  double std_dev = 0.05;  // normalized units
  double reward_threshold = 230.0;
  std::size_t memory = 50;
};

// Hand-made expert: an isotropic Gaussian that slides from the easy corner to
// the hard corner in equal increments, one increment each time the mean
// reward over the last `memory` tasks reaches the threshold.
class OracleTeacher final : public Teacher {
 public:
  OracleTeacher(TaskSpace space, OracleConfig config, std::uint64_t seed);

  std::string name() const override { return "Oracle"; }
  std::optional<GmmSnapshot> snapshot() const override;

  std::size_t position() const { return position_; }
  // Current Gaussian centre in raw units.
  TaskParams center() const;

 protected:
  TaskParams do_propose() override;
  void do_observe(const TaskParams& params, double reward) override;

 private:
  std::vector<double> unit_center() const;

  TaskSpace space_;
  OracleConfig config_;
  std::vector<double> easy_;
  std::vector<double> hard_;
  RandomStream rng_;
  std::size_t position_ = 0;
  std::deque<double> window_;
};

}  // namespace acl
