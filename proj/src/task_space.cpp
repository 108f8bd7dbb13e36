#include "acl/task_space.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "acl/errors.hpp"

namespace acl {

TaskSpace::TaskSpace(std::vector<double> lower, std::vector<double> upper)
    : lower_(std::move(lower)), upper_(std::move(upper)) {
  if (lower_.empty()) throw ConfigError("task space needs at least one dimension");
  if (lower_.size() != upper_.size())
    throw ConfigError("task space bounds have mismatched lengths");
  for (std::size_t i = 0; i < lower_.size(); ++i) {
    if (!std::isfinite(lower_[i]) || !std::isfinite(upper_[i]) || !(lower_[i] < upper_[i]))
      throw ConfigError("task space dimension " + std::to_string(i) +
                        " needs finite lower < upper");
  }
}

void TaskSpace::check_dims(const TaskParams& p) const {
  if (p.dims() != dims())
    throw ContractError("task params have " + std::to_string(p.dims()) +
                        " dims, space has " + std::to_string(dims()));
}

TaskParams TaskSpace::normalize(const TaskParams& raw) const {
  check_dims(raw);
  TaskParams out{std::vector<double>(dims())};
  for (std::size_t i = 0; i < dims(); ++i) out[i] = (raw[i] - lower_[i]) / width(i);
  return out;
}

TaskParams TaskSpace::denormalize(const TaskParams& unit) const {
  check_dims(unit);
  TaskParams out{std::vector<double>(dims())};
  for (std::size_t i = 0; i < dims(); ++i) out[i] = lower_[i] + unit[i] * width(i);
  return out;
}

TaskParams TaskSpace::sample_uniform(RandomStream& rng) const {
  TaskParams out{std::vector<double>(dims())};
  for (std::size_t i = 0; i < dims(); ++i) out[i] = rng.uniform(lower_[i], upper_[i]);
  return out;
}

TaskParams TaskSpace::clip(const TaskParams& raw) const {
  check_dims(raw);
  TaskParams out = raw;
  for (std::size_t i = 0; i < dims(); ++i) out[i] = std::clamp(raw[i], lower_[i], upper_[i]);
  return out;
}

bool TaskSpace::contains(const TaskParams& raw) const {
  if (raw.dims() != dims()) return false;
  for (std::size_t i = 0; i < dims(); ++i)
    if (!(raw[i] >= lower_[i] && raw[i] <= upper_[i])) return false;
  return true;
}

}  // namespace acl
