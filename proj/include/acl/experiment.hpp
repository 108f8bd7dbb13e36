#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "acl/again.hpp"
#include "acl/baselines.hpp"
#include "acl/curriculum_trace.hpp"
#include "acl/external_student.hpp"
#include "acl/student.hpp"
#include "acl/surrogate_student.hpp"

namespace acl {

enum class TeacherKind { Random, Oracle, AlpGmm, In, Again };

// One row of the results table: a teacher, plus for two-stage teachers the
// IN variant and what happens to the student between the runs.
struct Condition {
  TeacherKind kind = TeacherKind::AlpGmm;
  InVariant variant = InVariant::Reward;
  ResetMode reset = ResetMode::Scratch;

  bool two_stage() const { return kind == TeacherKind::In || kind == TeacherKind::Again; }
  // e.g. "AGAIN-R", "IN-T(fine-tune)", "ALP-GMM".
  std::string name() const;
  static Condition parse(std::string_view name);
  bool operator==(const Condition&) const = default;
};

// The 15 conditions in results-table order.
std::vector<Condition> all_conditions();

struct TestSetSpec {
  std::size_t resolution = 10;  // points per dimension
  double threshold = 230.0;     // mastered iff reward > threshold
};

struct StudentSpec {
  enum class Kind { Surrogate, External } kind = Kind::Surrogate;
  SurrogateProfile profile = SurrogateProfile::weak();
  ExternalStudentSpec external{};
};

struct ExperimentConfig {
  TaskSpace space{{0.0, 0.0}, {3.0, 6.0}};
  RewardSpan reward_span{};
  AlpGmmConfig alpgmm{};  // rho_rnd here is the high-exploration rate
  double rho_low = 0.02;
  double delta_lp = 0.1;
  std::size_t in_period = 250;
  std::size_t in_memory = kRewardMemory;
  OracleConfig oracle{{0.0, 6.0}, {3.0, 0.0}};
  StudentSpec student{};
  std::size_t budget = 20000;
  std::size_t checkpoint_every = 500;
  TestSetSpec test_set{};
  std::vector<std::uint64_t> seeds;
  std::vector<Condition> conditions;
  std::size_t jobs = 0;  // 0: hardware concurrency

  ExperimentConfig();
  // Throws ConfigError on inconsistent settings.
  void validate() const;
};

// Reads the declarative JSON config; absent keys keep their defaults.
ExperimentConfig parse_config(std::string_view json_text);
ExperimentConfig load_config(const std::filesystem::path& path);

std::vector<TaskParams> make_test_set(const TaskSpace& space, const TestSetSpec& spec);

// Fraction of test tasks whose reward strictly exceeds `threshold`.
double evaluate(Student& student, const std::vector<TaskParams>& test_set, double threshold);

std::unique_ptr<Student> make_student(const ExperimentConfig& config, std::uint64_t seed);

struct Checkpoint {
  std::size_t episode = 0;
  double mastery = 0.0;
};

struct RunResult {
  std::string condition;
  std::uint64_t seed = 0;
  std::vector<Checkpoint> curve;  // includes episode 0
  std::size_t training_episodes = 0;
  bool failed = false;
  std::string error;
  std::vector<std::string> diagnostics;
  std::optional<CurriculumTrace> trace;  // stage-1 (or ALP-GMM) trace

  double final_mastery() const { return curve.empty() ? 0.0 : curve.back().mastery; }
};

struct RunOptions {
  bool keep_trace = false;
  // Written when the ALP-GMM stage finishes, if non-empty.
  std::filesystem::path history_csv;
  // Two-stage runs: replay this trace instead of running stage 1.
  std::optional<CurriculumTrace> preset_trace;
};

RunResult run_condition(const ExperimentConfig& config, const Condition& condition,
                        std::uint64_t seed, const RunOptions& options = {});

// Condition-major order, seeds in config order. Runs execute on `jobs` threads.
std::vector<RunResult> run_sweep(const ExperimentConfig& config);

// Stream seeds for each stage, shared so that stage 1 of a two-stage run is
// the first half of the ALP-GMM run with the same seed.
std::uint64_t teacher_seed(std::uint64_t run_seed, std::string_view stage);

}  // namespace acl
