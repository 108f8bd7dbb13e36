#pragma once

#include <string>
#include <string_view>

#include "acl/task_space.hpp"

namespace acl {

enum class ResetMode { Scratch, FineTune };

std::string to_string(ResetMode m);
ResetMode parse_reset_mode(std::string_view s);

// What a teacher trains. evaluate() must not change the learner.
class Student {
 public:
  virtual ~Student() = default;

  virtual double evaluate(const TaskParams& params) = 0;
  // One training episode; returns the episodic reward.
  virtual double train_on(const TaskParams& params) = 0;
  // Scratch restores the initial state exactly; FineTune keeps everything.
  virtual void reset(ResetMode mode) = 0;
};

}  // namespace acl
