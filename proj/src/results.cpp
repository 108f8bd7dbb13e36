#include "acl/results.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "acl/errors.hpp"
#include "acl/stats.hpp"

namespace acl {

namespace {

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

// Conditions in first-seen order.
std::vector<std::string> condition_order(const std::vector<RunResult>& runs) {
  std::vector<std::string> order;
  for (const auto& r : runs)
    if (std::find(order.begin(), order.end(), r.condition) == order.end()) order.push_back(r.condition);
  return order;
}

std::vector<double> finals(const std::vector<RunResult>& runs, const std::string& cond) {
  std::vector<double> v;
  for (const auto& r : runs)
    if (r.condition == cond && !r.failed) v.push_back(100.0 * r.final_mastery());
  return v;
}

}  // namespace

std::vector<ConditionSummary> summarize(const std::vector<RunResult>& runs, double alpha) {
  const auto reference = finals(runs, "ALP-GMM");
  std::vector<ConditionSummary> out;
  for (const auto& cond : condition_order(runs)) {
    ConditionSummary s;
    s.condition = cond;
    for (const auto& r : runs)
      if (r.condition == cond && r.failed) ++s.failed;
    const auto v = finals(runs, cond);
    s.n_seeds = v.size();
    if (!v.empty()) s.mean = mean(v);
    if (v.size() >= 2) s.std_dev = sample_std(v);
    if (cond != "ALP-GMM") {
      if (auto w = try_welch_t_test(v, reference)) {
        s.p_vs_alpgmm = w->p;
        s.significant = w->p < alpha;
      }
    }
    out.push_back(s);
  }
  return out;
}

std::string condition_slug(const std::string& condition) {
  std::string s;
  for (char c : condition) {
    if (c == '(') s += '_';
    else if (c == ')') continue;
    else s += c;
  }
  return s;
}

void write_run_csv(std::ostream& os, const RunResult& run) {
  os << "# acl.curve.v1 status=" << (run.failed ? "failed" : "ok") << '\n';
  if (run.failed) os << "# error: " << run.error << '\n';
  for (const auto& d : run.diagnostics) os << "# note: " << d << '\n';
  os << "condition,seed,episode,mastery\n";
  for (const auto& c : run.curve)
    os << run.condition << ',' << run.seed << ',' << c.episode << ',' << fmt("%.6f", c.mastery) << '\n';
}

RunResult read_run_csv(std::istream& is) {
  RunResult r;
  std::string line;
  if (!std::getline(is, line) || !line.starts_with("# acl.curve.v1 status="))
    throw FormatError("not a curve file");
  r.failed = line.ends_with("failed");
  bool header = false;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (line.starts_with("# error: ")) {
      r.error = line.substr(9);
      continue;
    }
    if (line.starts_with("# note: ")) {
      r.diagnostics.push_back(line.substr(8));
      continue;
    }
    if (!header) {
      if (line != "condition,seed,episode,mastery") throw FormatError("bad curve header: " + line);
      header = true;
      continue;
    }
    std::istringstream ls(line);
    std::string cond, seed, ep, m;
    if (!std::getline(ls, cond, ',') || !std::getline(ls, seed, ',') || !std::getline(ls, ep, ',') ||
        !std::getline(ls, m))
      throw FormatError("bad curve row: " + line);
    try {
      r.condition = cond;
      r.seed = std::stoull(seed);
      r.curve.push_back({static_cast<std::size_t>(std::stoull(ep)), std::stod(m)});
    } catch (const std::exception&) {
      throw FormatError("bad curve row: " + line);
    }
  }
  if (!header) throw FormatError("curve file has no header");
  if (!r.curve.empty()) r.training_episodes = r.curve.back().episode;
  return r;
}

void write_summary_csv(std::ostream& os, const std::vector<ConditionSummary>& rows) {
  os << "# acl.summary.v1\n";
  os << "condition,n_seeds,failed,mean,std,p_vs_alpgmm,sig\n";
  for (const auto& s : rows) {
    os << s.condition << ',' << s.n_seeds << ',' << s.failed << ',' << fmt("%.4f", s.mean) << ','
       << fmt("%.4f", s.std_dev) << ',' << (s.p_vs_alpgmm ? fmt("%.6g", *s.p_vs_alpgmm) : "") << ','
       << (s.condition == "ALP-GMM" ? "" : s.significant ? "*" : "-") << '\n';
  }
}

void write_curves_csv(std::ostream& os, const std::vector<RunResult>& runs) {
  os << "condition,episode,n,mean,sem\n";
  for (const auto& cond : condition_order(runs)) {
    std::map<std::size_t, std::vector<double>> by_episode;
    for (const auto& r : runs)
      if (r.condition == cond && !r.failed)
        for (const auto& c : r.curve) by_episode[c.episode].push_back(100.0 * c.mastery);
    for (const auto& [ep, v] : by_episode) {
      os << cond << ',' << ep << ',' << v.size() << ',' << fmt("%.4f", mean(v)) << ','
         << fmt("%.4f", v.size() >= 2 ? standard_error(v) : 0.0) << '\n';
    }
  }
}

std::string format_table(const std::vector<ConditionSummary>& rows) {
  std::ostringstream os;
  char buf[160];
  std::snprintf(buf, sizeof buf, "%-20s %6s %6s %14s %10s\n", "condition", "seeds", "failed",
                "mastery %", "p vs ALP");
  os << buf;
  for (const auto& s : rows) {
    const std::string ms = fmt("%.1f", s.mean) + " +/- " + fmt("%.1f", s.std_dev);
    const std::string p = s.p_vs_alpgmm ? fmt("%.3g", *s.p_vs_alpgmm) + (s.significant ? " *" : "") : "";
    std::snprintf(buf, sizeof buf, "%-20s %6zu %6zu %14s %10s\n", s.condition.c_str(), s.n_seeds,
                  s.failed, ms.c_str(), p.c_str());
    os << buf;
  }
  return os.str();
}

void emit_results(const std::filesystem::path& dir, const std::vector<RunResult>& runs) {
  namespace fs = std::filesystem;
  for (const auto& r : runs) {
    const fs::path sub = dir / "runs" / condition_slug(r.condition);
    fs::create_directories(sub);
    std::ofstream os(sub / ("seed_" + std::to_string(r.seed) + ".csv"));
    if (!os) throw std::runtime_error("cannot write into " + sub.string());
    write_run_csv(os, r);
  }
  std::ofstream summary(dir / "summary.csv");
  write_summary_csv(summary, summarize(runs));
  std::ofstream curves(dir / "curves.csv");
  write_curves_csv(curves, runs);
}

std::vector<RunResult> load_runs(const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  const fs::path root = dir / "runs";
  if (!fs::is_directory(root)) throw FormatError("no runs/ directory under " + dir.string());
  std::vector<std::pair<std::string, fs::path>> files;
  for (const auto& e : fs::recursive_directory_iterator(root))
    if (e.is_regular_file() && e.path().extension() == ".csv") files.push_back({e.path().string(), e.path()});
  std::sort(files.begin(), files.end());
  std::vector<RunResult> runs;
  for (const auto& [_, p] : files) {
    std::ifstream is(p);
    runs.push_back(read_run_csv(is));
  }
  // Order by the canonical table order where possible, then seed.
  const auto order = all_conditions();
  auto rank = [&](const std::string& c) {
    for (std::size_t i = 0; i < order.size(); ++i)
      if (order[i].name() == c) return i;
    return order.size();
  };
  std::stable_sort(runs.begin(), runs.end(), [&](const RunResult& a, const RunResult& b) {
    return std::pair(rank(a.condition), a.seed) < std::pair(rank(b.condition), b.seed);
  });
  return runs;
}

}  // namespace acl
