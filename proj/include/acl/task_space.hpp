#pragma once

#include <cstddef>
#include <vector>

#include "acl/random.hpp"

namespace acl {

// A point in task-parameter space. Whether the values are raw or normalized
// depends on the call site; functions below say which they take.
struct TaskParams {
  std::vector<double> values;

  std::size_t dims() const { return values.size(); }
  double operator[](std::size_t i) const { return values[i]; }
  double& operator[](std::size_t i) { return values[i]; }
  bool operator==(const TaskParams&) const = default;
};

// Axis-aligned box of procedural-generation parameters. Immutable.
class TaskSpace {
 public:
  TaskSpace(std::vector<double> lower, std::vector<double> upper);

  std::size_t dims() const { return lower_.size(); }
  const std::vector<double>& lower() const { return lower_; }
  const std::vector<double>& upper() const { return upper_; }
  double width(std::size_t i) const { return upper_[i] - lower_[i]; }

  // Raw -> [0,1]^d, affine per coordinate.
  TaskParams normalize(const TaskParams& raw) const;
  TaskParams denormalize(const TaskParams& unit) const;

  TaskParams sample_uniform(RandomStream& rng) const;
  TaskParams clip(const TaskParams& raw) const;
  bool contains(const TaskParams& raw) const;

  bool operator==(const TaskSpace&) const = default;

 private:
  void check_dims(const TaskParams& p) const;

  std::vector<double> lower_;
  std::vector<double> upper_;
};

}  // namespace acl
