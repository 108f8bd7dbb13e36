#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "acl/experiment.hpp"

namespace acl {

struct ConditionSummary {
  std::string condition;
  std::size_t n_seeds = 0;  // successful runs
  std::size_t failed = 0;
  double mean = 0.0;        // final mastery, percent
  double std_dev = 0.0;
  std::optional<double> p_vs_alpgmm;  // Welch, final mastery
  bool significant = false;           // p < 0.05
};

std::vector<ConditionSummary> summarize(const std::vector<RunResult>& runs, double alpha = 0.05);

// Filesystem-safe directory name for a condition, e.g. "AGAIN-R_fine-tune".
std::string condition_slug(const std::string& condition);

void write_run_csv(std::ostream& os, const RunResult& run);
RunResult read_run_csv(std::istream& is);

void write_summary_csv(std::ostream& os, const std::vector<ConditionSummary>& rows);
void write_curves_csv(std::ostream& os, const std::vector<RunResult>& runs);
std::string format_table(const std::vector<ConditionSummary>& rows);

// Writes runs/<slug>/seed_<s>.csv, summary.csv and curves.csv under `dir`.
void emit_results(const std::filesystem::path& dir, const std::vector<RunResult>& runs);
// Reads every runs/*/seed_*.csv under `dir` in a stable order.
std::vector<RunResult> load_runs(const std::filesystem::path& dir);

}  // namespace acl
