#pragma once

#include <chrono>
#include <memory>
#include <string>
#include <vector>

#include "acl/student.hpp"

namespace acl {

struct ExternalStudentSpec {
  std::vector<std::string> argv;  // program and arguments, resolved via PATH
  std::chrono::milliseconds timeout{30000};
};

// Adapts a child process that speaks newline-delimited JSON on stdin/stdout:
//   {"cmd":"train","params":[...]}            -> {"reward": r}
//   {"cmd":"eval","params":[...]}             -> {"reward": r}
//   {"cmd":"reset","mode":"scratch"|"fine_tune"} -> {"ok": true}
// Any malformed reply, timeout, or exit raises ProtocolError.
class ExternalStudent final : public Student {
 public:
  explicit ExternalStudent(ExternalStudentSpec spec);
  ~ExternalStudent() override;

  ExternalStudent(const ExternalStudent&) = delete;
  ExternalStudent& operator=(const ExternalStudent&) = delete;

  double evaluate(const TaskParams& params) override;
  double train_on(const TaskParams& params) override;
  void reset(ResetMode mode) override;

 private:
  std::string roundtrip(const std::string& request);
  double reward_reply(const std::string& request);
  void shutdown();

  ExternalStudentSpec spec_;
  int fd_ = -1;
  int pid_ = -1;
  std::string buffer_;
};

std::unique_ptr<Student> external_student_session(ExternalStudentSpec spec);

}  // namespace acl
