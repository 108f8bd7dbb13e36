// acl: run teacher/student curriculum experiments from the command line.
#include <cstdio>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "acl/curriculum_trace.hpp"
#include "acl/errors.hpp"
#include "acl/experiment.hpp"
#include "acl/results.hpp"

namespace {

struct Overrides {
  std::string config_path;
  std::size_t budget = 0;
  std::size_t seed_count = 0;
  std::size_t jobs = 0;
  std::string profile;
};

void add_overrides(CLI::App* app, Overrides& o) {
  app->add_option("-c,--config", o.config_path, "JSON experiment config")->check(CLI::ExistingFile);
  app->add_option("--budget", o.budget, "training episodes per run");
  app->add_option("--profile", o.profile, "surrogate profile: strong or weak");
}

acl::ExperimentConfig build_config(const Overrides& o) {
  acl::ExperimentConfig c = o.config_path.empty() ? acl::ExperimentConfig{} : acl::load_config(o.config_path);
  if (o.budget) c.budget = o.budget;
  if (o.seed_count) {
    c.seeds.clear();
    for (std::uint64_t s = 0; s < o.seed_count; ++s) c.seeds.push_back(s);
  }
  if (o.jobs) c.jobs = o.jobs;
  if (!o.profile.empty()) {
    c.student.profile = acl::SurrogateProfile::by_name(o.profile);
    c.student.profile.span = c.reward_span;
  }
  c.validate();
  return c;
}

int report(const std::vector<acl::RunResult>& runs) {
  std::cout << acl::format_table(acl::summarize(runs));
  int failed = 0;
  for (const auto& r : runs)
    if (r.failed) {
      std::cerr << "run failed: " << r.condition << " seed " << r.seed << ": " << r.error << '\n';
      ++failed;
    }
  return failed ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Teacher algorithms for curriculum learning on surrogate or external students"};
  app.require_subcommand(1);

  Overrides run_o;
  std::string condition = "ALP-GMM";
  std::uint64_t seed = 0;
  std::string out_dir = "results";
  std::string trace_out, trace_in, history_out;
  auto* run = app.add_subcommand("run", "run one condition for one seed");
  add_overrides(run, run_o);
  run->add_option("--condition", condition, "e.g. ALP-GMM, AGAIN-R, IN-T(fine-tune), Random, Oracle");
  run->add_option("--seed", seed, "run seed");
  run->add_option("-o,--out", out_dir, "output directory");
  run->add_option("--save-trace", trace_out, "write the preliminary-run trace here");
  run->add_option("--load-trace", trace_in, "skip the preliminary run and replay this trace")
      ->check(CLI::ExistingFile);
  run->add_option("--history", history_out, "write the ALP history (H) as CSV");

  Overrides sweep_o;
  std::string sweep_dir = "results";
  auto* sweep = app.add_subcommand("sweep", "run every configured condition over every seed");
  add_overrides(sweep, sweep_o);
  sweep->add_option("--seeds", sweep_o.seed_count, "use seeds 0..n-1");
  sweep->add_option("-j,--jobs", sweep_o.jobs, "worker threads");
  sweep->add_option("-o,--out", sweep_dir, "output directory");

  std::string distill_trace;
  double delta_lp = 0.1;
  std::string distill_out;
  auto* distill = app.add_subcommand("distill", "filter a saved trace and print the curriculum");
  distill->add_option("trace", distill_trace, "trace file")->required()->check(CLI::ExistingFile);
  distill->add_option("--delta-lp", delta_lp, "minimum learning progress kept");
  distill->add_option("-o,--out", distill_out, "write the filtered curriculum as a trace file");

  std::string report_dir = "results";
  auto* rep = app.add_subcommand("report", "aggregate per-seed CSVs into summary and curves");
  rep->add_option("dir", report_dir, "results directory")->check(CLI::ExistingDirectory);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      const auto config = build_config(run_o);
      const auto cond = acl::Condition::parse(condition);
      acl::RunOptions opts;
      opts.keep_trace = !trace_out.empty();
      opts.history_csv = history_out;
      if (!trace_in.empty()) {
        if (!cond.two_stage()) throw acl::ConfigError("--load-trace only applies to IN and AGAIN");
        opts.preset_trace = acl::load_trace(trace_in, &config.space);
      }
      auto result = acl::run_condition(config, cond, seed, opts);
      if (result.trace && !trace_out.empty()) acl::save_trace(*result.trace, trace_out);
      const std::filesystem::path sub = std::filesystem::path(out_dir) / "runs" / acl::condition_slug(result.condition);
      std::filesystem::create_directories(sub);
      std::ofstream os(sub / ("seed_" + std::to_string(seed) + ".csv"));
      acl::write_run_csv(os, result);
      for (const auto& d : result.diagnostics) std::cerr << "note: " << d << '\n';
      if (result.failed) {
        std::cerr << "run failed: " << result.error << '\n';
        return 1;
      }
      std::printf("%s seed %llu: final mastery %.1f%% after %zu episodes\n", result.condition.c_str(),
                  static_cast<unsigned long long>(seed), 100.0 * result.final_mastery(),
                  result.training_episodes);
      return 0;
    }
    if (*sweep) {
      const auto config = build_config(sweep_o);
      const auto runs = acl::run_sweep(config);
      acl::emit_results(sweep_dir, runs);
      return report(runs);
    }
    if (*distill) {
      const auto trace = acl::load_trace(distill_trace);
      const auto cur = acl::filter(trace, delta_lp);
      std::printf("trace: %zu snapshots, seed %llu; after filter (delta_lp=%g): %zu\n", trace.size(),
                  static_cast<unsigned long long>(trace.meta.seed), delta_lp, cur.size());
      for (std::size_t i = 0; i < cur.size(); ++i) {
        const auto& s = cur.snapshots[i];
        std::printf("[%zu] fit@%lld threshold %.3f components %zu\n", i, static_cast<long long>(s.fit_episode), cur.thresholds[i],
                    s.components.size());
        for (const auto& g : s.components) {
          std::printf("    lp %.4f  mean", g.lp());
          for (std::size_t k = 0; k + 1 < static_cast<std::size_t>(g.mean.size()); ++k)
            std::printf(" %.4f", g.mean[k]);
          std::printf("\n");
        }
      }
      if (!distill_out.empty()) acl::save_trace(cur.as_trace(), distill_out);
      return 0;
    }
    if (*rep) {
      const auto runs = acl::load_runs(report_dir);
      const std::filesystem::path dir(report_dir);
      std::ofstream summary(dir / "summary.csv");
      acl::write_summary_csv(summary, acl::summarize(runs));
      std::ofstream curves(dir / "curves.csv");
      acl::write_curves_csv(curves, runs);
      return report(runs);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
