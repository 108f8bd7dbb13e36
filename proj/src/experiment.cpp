#include "acl/experiment.hpp"

#include <atomic>
#include <fstream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "acl/alp_gmm.hpp"
#include "acl/errors.hpp"

namespace acl {

using nlohmann::json;

std::string Condition::name() const {
  switch (kind) {
    case TeacherKind::Random: return "Random";
    case TeacherKind::Oracle: return "Oracle";
    case TeacherKind::AlpGmm: return "ALP-GMM";
    case TeacherKind::In:
    case TeacherKind::Again: {
      std::string n = (kind == TeacherKind::In ? "IN-" : "AGAIN-") + to_string(variant);
      if (reset == ResetMode::FineTune) n += "(fine-tune)";
      return n;
    }
  }
  return "?";
}

Condition Condition::parse(std::string_view name) {
  if (name == "Random") return {TeacherKind::Random};
  if (name == "Oracle") return {TeacherKind::Oracle};
  if (name == "ALP-GMM") return {TeacherKind::AlpGmm};
  Condition c;
  std::string_view rest;
  if (name.starts_with("AGAIN-")) {
    c.kind = TeacherKind::Again;
    rest = name.substr(6);
  } else if (name.starts_with("IN-")) {
    c.kind = TeacherKind::In;
    rest = name.substr(3);
  } else {
    throw ConfigError("unknown condition '" + std::string(name) + "'");
  }
  constexpr std::string_view kFineTune = "(fine-tune)";
  if (rest.ends_with(kFineTune)) {
    c.reset = ResetMode::FineTune;
    rest.remove_suffix(kFineTune.size());
  }
  if (rest.size() != 1) throw ConfigError("unknown condition '" + std::string(name) + "'");
  c.variant = parse_in_variant(rest);
  return c;
}

std::vector<Condition> all_conditions() {
  std::vector<Condition> out;
  for (InVariant v : {InVariant::Reward, InVariant::Time, InVariant::Pool})
    for (TeacherKind k : {TeacherKind::Again, TeacherKind::In})
      for (ResetMode m : {ResetMode::Scratch, ResetMode::FineTune}) out.push_back({k, v, m});
  out.push_back({TeacherKind::AlpGmm});
  out.push_back({TeacherKind::Oracle});
  out.push_back({TeacherKind::Random});
  return out;
}

ExperimentConfig::ExperimentConfig() {
  for (std::uint64_t s = 0; s < 30; ++s) seeds.push_back(s);
  conditions = all_conditions();
}

void ExperimentConfig::validate() const {
  reward_span.validate();
  alpgmm.validate();
  if (!(rho_low >= 0.0 && rho_low <= 1.0)) throw ConfigError("rho_low must lie in [0,1]");
  if (!(delta_lp >= 0.0)) throw ConfigError("delta_lp must be non-negative");
  if (in_period == 0 || in_memory == 0) throw ConfigError("IN period and memory must be positive");
  if (budget == 0) throw ConfigError("episode budget must be positive");
  if (checkpoint_every == 0) throw ConfigError("checkpoint interval must be positive");
  if (test_set.resolution == 0) throw ConfigError("test grid resolution must be positive");
  if (seeds.empty()) throw ConfigError("no seeds given");
  if (conditions.empty()) throw ConfigError("no conditions given");
  if (oracle.easy_corner.size() != space.dims() || oracle.hard_corner.size() != space.dims())
    throw ConfigError("oracle corners must match the task-space dimension");
  if (!space.contains(TaskParams{oracle.easy_corner}) || !space.contains(TaskParams{oracle.hard_corner}))
    throw ConfigError("oracle corners must lie inside the task space");
  if (student.kind == StudentSpec::Kind::External && student.external.argv.empty())
    throw ConfigError("external student needs a command");
}

namespace {

template <typename T>
void take(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

void reject_unknown(const json& j, std::initializer_list<std::string_view> known, const char* where) {
  for (const auto& [k, v] : j.items()) {
    bool ok = false;
    for (auto kk : known) ok = ok || k == kk;
    if (!ok) throw ConfigError(std::string("unknown key '") + k + "' in " + where);
  }
}

}  // namespace

ExperimentConfig parse_config(std::string_view json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  reject_unknown(j, {"task_space", "reward_span", "alpgmm", "again", "oracle", "student", "budget",
                     "checkpoint_every", "test_set", "seeds", "conditions", "jobs"},
                 "config");
  ExperimentConfig c;
  try {
    if (j.contains("task_space")) {
      const auto& t = j.at("task_space");
      reject_unknown(t, {"lower", "upper"}, "task_space");
      c.space = TaskSpace(t.at("lower").get<std::vector<double>>(),
                          t.at("upper").get<std::vector<double>>());
      // Corners default to the box diagonal: low dim-0 / high rest is easy.
      c.oracle.easy_corner = c.space.lower();
      c.oracle.hard_corner = c.space.upper();
      for (std::size_t i = 1; i < c.space.dims(); ++i) {
        c.oracle.easy_corner[i] = c.space.upper()[i];
        c.oracle.hard_corner[i] = c.space.lower()[i];
      }
    }
    if (j.contains("reward_span")) {
      const auto s = j.at("reward_span").get<std::vector<double>>();
      if (s.size() != 2) throw ConfigError("reward_span must be [min, max]");
      c.reward_span = {s[0], s[1]};
    }
    if (j.contains("alpgmm")) {
      const auto& a = j.at("alpgmm");
      reject_unknown(a, {"fit_rate", "k_max", "rho_rnd", "em_max_iterations", "em_tolerance"}, "alpgmm");
      take(a, "fit_rate", c.alpgmm.fit_rate);
      take(a, "k_max", c.alpgmm.k_max);
      take(a, "rho_rnd", c.alpgmm.rho_rnd);
      take(a, "em_max_iterations", c.alpgmm.em.max_iterations);
      take(a, "em_tolerance", c.alpgmm.em.tolerance_per_point);
    }
    if (j.contains("again")) {
      const auto& a = j.at("again");
      reject_unknown(a, {"rho_low", "delta_lp", "in_period", "in_memory"}, "again");
      take(a, "rho_low", c.rho_low);
      take(a, "delta_lp", c.delta_lp);
      take(a, "in_period", c.in_period);
      take(a, "in_memory", c.in_memory);
    }
    if (j.contains("oracle")) {
      const auto& o = j.at("oracle");
      reject_unknown(o, {"easy_corner", "hard_corner", "steps", "std", "threshold", "memory"}, "oracle");
      take(o, "easy_corner", c.oracle.easy_corner);
      take(o, "hard_corner", c.oracle.hard_corner);
      take(o, "steps", c.oracle.steps);
      take(o, "std", c.oracle.std_dev);
      take(o, "threshold", c.oracle.reward_threshold);
      take(o, "memory", c.oracle.memory);
    }
    if (j.contains("student")) {
      const auto& s = j.at("student");
      const std::string kind = s.value("kind", std::string("surrogate"));
      if (kind == "surrogate") {
        reject_unknown(s, {"kind", "profile", "mask_base", "mask_slope", "grid", "frontier_width", "prerequisite_level",
                           "learn_rate", "kernel_sigma", "clutter_scale", "noise_fraction"},
                       "student");
        c.student.kind = StudentSpec::Kind::Surrogate;
        c.student.profile = SurrogateProfile::by_name(s.value("profile", std::string("weak")));
        auto& p = c.student.profile;
        take(s, "mask_base", p.mask_base);
        take(s, "mask_slope", p.mask_slope);
        take(s, "grid", p.grid);
        take(s, "frontier_width", p.frontier_width);
        take(s, "prerequisite_level", p.prerequisite_level);
        take(s, "learn_rate", p.learn_rate);
        take(s, "kernel_sigma", p.kernel_sigma);
        take(s, "clutter_scale", p.clutter_scale);
        take(s, "noise_fraction", p.noise_fraction);
      } else if (kind == "external") {
        reject_unknown(s, {"kind", "command", "timeout_ms"}, "student");
        c.student.kind = StudentSpec::Kind::External;
        c.student.external.argv = s.at("command").get<std::vector<std::string>>();
        if (s.contains("timeout_ms"))
          c.student.external.timeout = std::chrono::milliseconds(s.at("timeout_ms").get<long>());
      } else {
        throw ConfigError("unknown student kind '" + kind + "'");
      }
    }
    take(j, "budget", c.budget);
    take(j, "checkpoint_every", c.checkpoint_every);
    if (j.contains("test_set")) {
      const auto& t = j.at("test_set");
      reject_unknown(t, {"resolution", "threshold"}, "test_set");
      take(t, "resolution", c.test_set.resolution);
      take(t, "threshold", c.test_set.threshold);
    }
    if (j.contains("seeds")) {
      const auto& s = j.at("seeds");
      c.seeds.clear();
      if (s.is_array()) {
        c.seeds = s.get<std::vector<std::uint64_t>>();
      } else {
        reject_unknown(s, {"first", "count"}, "seeds");
        const auto first = s.value("first", std::uint64_t{0});
        const auto count = s.at("count").get<std::uint64_t>();
        for (std::uint64_t i = 0; i < count; ++i) c.seeds.push_back(first + i);
      }
    }
    if (j.contains("conditions")) {
      c.conditions.clear();
      for (const auto& n : j.at("conditions")) c.conditions.push_back(Condition::parse(n.get<std::string>()));
    }
    take(j, "jobs", c.jobs);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad config value: ") + e.what());
  }
  c.alpgmm.reward_span = c.reward_span;
  c.student.profile.span = c.reward_span;
  c.validate();
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open config " + path.string());
  std::ostringstream ss;
  ss << is.rdbuf();
  return parse_config(ss.str());
}

std::vector<TaskParams> make_test_set(const TaskSpace& space, const TestSetSpec& spec) {
  const std::size_t d = space.dims();
  std::size_t total = 1;
  for (std::size_t i = 0; i < d; ++i) total *= spec.resolution;
  std::vector<TaskParams> out;
  out.reserve(total);
  for (std::size_t f = 0; f < total; ++f) {
    TaskParams p{std::vector<double>(d)};
    std::size_t rem = f;
    for (std::size_t i = d; i-- > 0;) {
      const double u = (static_cast<double>(rem % spec.resolution) + 0.5) /
                       static_cast<double>(spec.resolution);
      p[i] = space.lower()[i] + u * space.width(i);
      rem /= spec.resolution;
    }
    out.push_back(std::move(p));
  }
  return out;
}

double evaluate(Student& student, const std::vector<TaskParams>& test_set, double threshold) {
  if (test_set.empty()) return 0.0;
  std::size_t mastered = 0;
  for (const auto& p : test_set)
    if (student.evaluate(p) > threshold) ++mastered;
  return static_cast<double>(mastered) / static_cast<double>(test_set.size());
}

std::unique_ptr<Student> make_student(const ExperimentConfig& config, std::uint64_t seed) {
  if (config.student.kind == StudentSpec::Kind::External)
    return external_student_session(config.student.external);
  auto profile = config.student.profile;
  profile.span = config.reward_span;
  return std::make_unique<SurrogateStudent>(config.space, profile, teacher_seed(seed, "student"));
}

std::uint64_t teacher_seed(std::uint64_t run_seed, std::string_view stage) {
  return RandomStream(run_seed).derive(stage).next_u64();
}

namespace {

AlpGmmConfig stage_alpgmm(const ExperimentConfig& c) {
  AlpGmmConfig a = c.alpgmm;
  a.reward_span = c.reward_span;
  return a;
}

class RunLoop {
 public:
  RunLoop(const ExperimentConfig& config, RunResult& result, Student& student)
      : config_(config), result_(result), student_(student),
        test_set_(make_test_set(config.space, config.test_set)) {}

  void checkpoint() {
    result_.curve.push_back({episode_, evaluate(student_, test_set_, config_.test_set.threshold)});
  }

  void start_at(std::size_t episode) { episode_ = episode; }

  void train(Teacher& teacher, std::size_t episodes) {
    for (std::size_t i = 0; i < episodes; ++i) {
      const TaskParams p = teacher.propose();
      const double r = student_.train_on(p);
      teacher.observe(p, r);
      ++episode_;
      ++result_.training_episodes;
      if (episode_ % config_.checkpoint_every == 0) checkpoint();
    }
  }

  void finish() {
    if (result_.curve.empty() || result_.curve.back().episode != episode_) checkpoint();
  }

 private:
  const ExperimentConfig& config_;
  RunResult& result_;
  Student& student_;
  std::vector<TaskParams> test_set_;
  std::size_t episode_ = 0;
};

std::unique_ptr<Teacher> stage_two_teacher(const ExperimentConfig& config, const Condition& cond,
                                           FilteredCurriculum curriculum, std::uint64_t seed) {
  if (cond.kind == TeacherKind::In)
    return std::make_unique<InTeacher>(std::move(curriculum), cond.variant, config.space, seed,
                                       config.in_period, config.in_memory);
  AgainConfig ac;
  ac.in_variant = cond.variant;
  ac.rho_low = config.rho_low;
  ac.alpgmm = stage_alpgmm(config);
  ac.in_period = config.in_period;
  ac.in_memory = config.in_memory;
  return std::make_unique<AgainTeacher>(std::move(curriculum), ac, config.space, seed);
}

void write_history(const RunOptions& options, const AlpGmmTeacher& teacher, const TaskSpace& space) {
  if (options.history_csv.empty()) return;
  std::ofstream os(options.history_csv);
  if (!os) throw std::runtime_error("cannot write history to " + options.history_csv.string());
  write_history_csv(os, teacher.core().tracker().history(), space);
}

}  // namespace

RunResult run_condition(const ExperimentConfig& config, const Condition& cond, std::uint64_t seed,
                        const RunOptions& options) {
  RunResult result;
  result.condition = cond.name();
  result.seed = seed;

  std::unique_ptr<Student> student;
  try {
    student = make_student(config, seed);
    RunLoop loop(config, result, *student);

    switch (cond.kind) {
      case TeacherKind::Random: {
        RandomTeacher t(config.space, teacher_seed(seed, "random"));
        loop.checkpoint();
        loop.train(t, config.budget);
        break;
      }
      case TeacherKind::Oracle: {
        OracleConfig oc = config.oracle;
        OracleTeacher t(config.space, oc, teacher_seed(seed, "oracle"));
        loop.checkpoint();
        loop.train(t, config.budget);
        break;
      }
      case TeacherKind::AlpGmm: {
        AlpGmmTeacher t(config.space, stage_alpgmm(config), teacher_seed(seed, "alpgmm"));
        loop.checkpoint();
        loop.train(t, config.budget);
        if (options.keep_trace) result.trace = t.trace();
        write_history(options, t, config.space);
        break;
      }
      case TeacherKind::In:
      case TeacherKind::Again: {
        const std::size_t first = config.budget / 2;
        CurriculumTrace trace;
        if (options.preset_trace) {
          if (cond.reset == ResetMode::FineTune)
            throw ConfigError("a fine-tune run needs its own preliminary run, not a saved trace");
          trace = *options.preset_trace;
          loop.start_at(first);
          loop.checkpoint();
        } else {
          // Same seed stream as the ALP-GMM condition: stage 1 is its first half.
          AlpGmmTeacher t(config.space, stage_alpgmm(config), teacher_seed(seed, "alpgmm"));
          loop.checkpoint();
          loop.train(t, first);
          trace = t.trace();
          write_history(options, t, config.space);
          student->reset(cond.reset);
        }
        FilteredCurriculum curriculum = filter(trace, config.delta_lp);
        if (options.keep_trace) result.trace = std::move(trace);
        if (curriculum.empty())
          result.diagnostics.push_back("filtered curriculum is empty (no arm with LP >= delta_lp)");
        if (curriculum.empty() && cond.kind == TeacherKind::In) {
          // IN has nothing to replay; the failure is reported, not hidden.
          throw ConfigError("IN cannot run on an empty filtered curriculum");
        }
        auto t = stage_two_teacher(config, cond, std::move(curriculum), teacher_seed(seed, "stage2"));
        loop.train(*t, config.budget - first);
        for (const auto& d : t->diagnostics()) result.diagnostics.push_back(d);
        break;
      }
    }
    loop.finish();
  } catch (const std::exception& e) {
    result.failed = true;
    result.error = e.what();
  }
  return result;
}

std::vector<RunResult> run_sweep(const ExperimentConfig& config) {
  config.validate();
  struct Job {
    Condition cond;
    std::uint64_t seed;
  };
  std::vector<Job> jobs;
  for (const auto& c : config.conditions)
    for (auto s : config.seeds) jobs.push_back({c, s});

  std::vector<RunResult> results(jobs.size());
  std::atomic<std::size_t> next{0};
  std::size_t workers = config.jobs ? config.jobs : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, jobs.size());
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < jobs.size(); i = next++)
          results[i] = run_condition(config, jobs[i].cond, jobs[i].seed);
      });
  }
  return results;
}

}  // namespace acl
