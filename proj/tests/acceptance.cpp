// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.
#include <algorithm>
#include <chrono>
#include <cstdarg>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>

#include "acl/alp_tracker.hpp"
#include "acl/curriculum_trace.hpp"
#include "acl/experiment.hpp"
#include "acl/gmm.hpp"
#include "acl/inferred_niches.hpp"
#include "acl/results.hpp"
#include "acl/stats.hpp"
#include "oracles.hpp"
#include "support.hpp"
#include "welch_reference.hpp"

using namespace acl;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;

void report(const char* name, bool ok, const std::string& detail) {
  std::printf("%s  %-28s %s\n", ok ? "PASS" : "FAIL", name, detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

// Tolerances and sizes, pinned.
constexpr int kAlpHistories = 1000;
constexpr int kAlpMaxLength = 500;
constexpr double kAlpSeconds = 10.0;
constexpr int kRecoveryTrials = 50;
constexpr int kRecoveryPoints = 250;
constexpr double kRecoveryRate = 0.90;
constexpr double kRecoveryMeanTol = 0.05;
constexpr double kRecoverySeconds = 60.0;
constexpr double kEmSlack = 1e-7;
constexpr int kFilterTraces = 200;
constexpr double kDeltaLp = 0.1;
constexpr int kLpVectors = 20;
constexpr int kLpDraws = 100000;
constexpr double kChiSquaredMinP = 0.001;
constexpr int kPersistTraces = 100;
constexpr double kWelchTol = 1e-6;
constexpr double kSweepSeconds = 30.0 * 60.0;
constexpr double kSignificance = 0.05;

void alp_oracle_equivalence() {
  const auto t0 = Clock::now();
  RandomStream rng(20240101);
  const RewardSpan span{};
  long checks = 0, mismatches = 0;
  for (int h = 0; h < kAlpHistories; ++h) {
    const std::size_t dims = 1 + rng.index(4);
    const std::size_t len = 1 + rng.index(kAlpMaxLength);
    HistoryDb db(dims);
    std::vector<oracle::Rec> ref;
    for (std::size_t i = 0; i < len; ++i) {
      std::vector<double> p(dims);
      for (auto& v : p) v = rng.uniform() < 0.2 ? std::round(rng.uniform() * 10.0) / 10.0 : rng.uniform();
      const double r = rng.uniform(-300.0, 500.0);
      ++checks;
      if (compute_alp(p, r, db, span) != oracle::alp(ref, p, r, span.min, span.max)) ++mismatches;
      db.append(p, r);
      ref.push_back({p, r});
    }
  }
  const double s = seconds_since(t0);
  report("alp-oracle-equivalence", mismatches == 0 && s < kAlpSeconds,
         fmt("%ld queries over %d histories, %ld mismatches, %.2fs (limit %.0fs)", checks, kAlpHistories,
             mismatches, s, kAlpSeconds));
}

void gmm_recovery_and_em_monotonicity() {
  const auto t0 = Clock::now();
  int k3 = 0, means_ok = 0;
  double worst_drop = 0.0;
  long iterations = 0;
  for (int trial = 0; trial < kRecoveryTrials; ++trial) {
    RandomStream data(1000 + trial);
    const auto truth = test_support::three_clusters(data, kRecoveryPoints);
    RandomStream rng(5000 + trial);
    const auto sel = select_best_k(truth.points, 10, rng);
    for (const auto& cand : sel.candidates) {
      const auto& ll = cand.log_likelihood_trace;
      for (std::size_t i = 1; i < ll.size(); ++i) worst_drop = std::max(worst_drop, ll[i - 1] - ll[i]);
      ++iterations;
    }
    if (sel.model().size() != 3) continue;
    ++k3;
    bool ok = true;
    for (const auto& mu : truth.means) {
      double best = 1e9;
      for (const auto& c : sel.model().components) best = std::min(best, (c.mean - mu).norm());
      ok = ok && best <= kRecoveryMeanTol;
    }
    if (ok) ++means_ok;
  }
  const double s = seconds_since(t0);
  const double rate = static_cast<double>(k3) / kRecoveryTrials;
  report("gmm-recovery", rate >= kRecoveryRate && means_ok == k3 && s < kRecoverySeconds,
         fmt("k=3 in %d/%d trials (need %.0f%%), means within %.2f in %d/%d, %.1fs (limit %.0fs)", k3,
             kRecoveryTrials, 100 * kRecoveryRate, kRecoveryMeanTol, means_ok, k3, s, kRecoverySeconds));
  report("em-monotonicity", worst_drop <= kEmSlack,
         fmt("%ld EM fits, largest log-likelihood drop %.3g (slack %.0e)", iterations, worst_drop, kEmSlack));
}

void filter_contract() {
  RandomStream rng(77);
  int bad = 0;
  for (int i = 0; i < kFilterTraces; ++i) {
    auto t = test_support::random_trace(rng, 1 + i % 3);
    // Push some LPs right onto the cut.
    for (auto& s : t.snapshots)
      for (auto& g : s.components)
        if (rng.uniform() < 0.1) g.mean[g.mean.size() - 1] = kDeltaLp;
    const auto f = filter(t, kDeltaLp);
    bool ok = f.snapshots.size() == f.thresholds.size();
    for (const auto& s : f.snapshots) {
      ok = ok && !s.empty();
      for (const auto& g : s.components) ok = ok && g.lp() >= kDeltaLp;
    }
    // Surviving arms are exactly those at or above the cut, in order.
    std::size_t expect = 0, got = 0;
    for (const auto& s : t.snapshots)
      for (const auto& g : s.components) expect += g.lp() >= kDeltaLp;
    for (const auto& s : f.snapshots) got += s.size();
    ok = ok && expect == got;
    // Thresholds follow their snapshots.
    std::size_t j = 0;
    for (std::size_t k = 0; k < t.size() && j < f.size(); ++k)
      if (t.snapshots[k].fit_episode == f.snapshots[j].fit_episode) ok = ok && t.reward_means[k] == f.thresholds[j++];
    ok = ok && j == f.size();
    const auto again = filter(f.as_trace(), kDeltaLp);
    ok = ok && serialize_trace(again.as_trace()) == serialize_trace(f.as_trace());
    if (!ok) ++bad;
  }
  report("filter-contract", bad == 0,
         fmt("%d random traces, delta_lp=%.1f, %d violations (no low-LP arm, |C|=|R|, idempotent)",
             kFilterTraces, kDeltaLp, bad));
}

FilteredCurriculum ladder(std::size_t n, const std::vector<double>& thr) {
  FilteredCurriculum c;
  c.meta.lower = {0.0};
  c.meta.upper = {1.0};
  for (std::size_t i = 0; i < n; ++i) {
    GmmSnapshot s;
    s.fit_episode = static_cast<std::int64_t>(i + 1);
    s.components = {test_support::gaussian({0.5, 0.5}, 0.01)};
    c.snapshots.push_back(s);
    c.thresholds.push_back(thr[i]);
  }
  return c;
}

void stepping_rules() {
  long cases = 0, bad = 0;
  // Time: every n, period combination.
  for (std::size_t n = 1; n <= 6; ++n)
    for (std::size_t period = 1; period <= 6; ++period) {
      InferredNiches in(ladder(n, std::vector<double>(n, 0.0)), InVariant::Time, period);
      for (std::size_t e = 1; e <= period * (n + 2); ++e) {
        in.observe(0.0);
        ++cases;
        if (in.index() != std::min(e / period, n - 1)) ++bad;
      }
    }
  // Reward: every 0/1 sequence of length 10 with memory 1..3 and every
  // threshold in {0, 1/3, 1/2, 2/3, 1}.
  for (std::size_t memory = 1; memory <= 3; ++memory)
    for (double thr : {0.0, 1.0 / 3.0, 0.5, 2.0 / 3.0, 1.0})
      for (unsigned bits = 0; bits < (1u << 10); ++bits) {
        const std::size_t n = 3;
        InferredNiches in(ladder(n, std::vector<double>(n, thr)), InVariant::Reward, 250, memory);
        std::vector<double> w;
        std::size_t idx = 0;
        for (int e = 0; e < 10; ++e) {
          const double r = (bits >> e) & 1u;
          in.observe(r);
          w.push_back(r);
          if (w.size() > memory) w.erase(w.begin());
          if (w.size() == memory) {
            double sum = 0.0;
            for (double v : w) sum += v;
            if (sum / static_cast<double>(memory) >= thr) {
              idx = std::min(idx + 1, n - 1);
              w.clear();
            }
          }
          ++cases;
          if (in.index() != idx) ++bad;
        }
      }
  report("stepping-rules", bad == 0, fmt("%ld scripted steps (IN-T and IN-R, exhaustive small sizes), %ld wrong", cases, bad));
}

void sampling_proportionality() {
  RandomStream rng(31337);
  double worst_p = 1.0;
  int zero_hits = 0;
  for (int v = 0; v < kLpVectors; ++v) {
    const std::size_t k = 2 + rng.index(9);
    std::vector<WeightedGaussian> mix;
    double total = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      const double lp = (i > 0 && rng.uniform() < 0.15) ? 0.0 : rng.uniform(0.01, 1.0);
      mix.push_back(test_support::gaussian({0.5, 0.5, lp}, 0.01));
      total += lp;
    }
    std::vector<long> counts(k, 0);
    RandomStream draw(rng.next_u64());
    for (int d = 0; d < kLpDraws; ++d) ++counts[sample_component_by_lp(mix, draw)];
    double chi2 = 0.0;
    int cells = 0;
    for (std::size_t i = 0; i < k; ++i) {
      const double expect = kLpDraws * mix[i].lp() / total;
      if (expect == 0.0) {
        zero_hits += counts[i] != 0;
        continue;
      }
      chi2 += (counts[i] - expect) * (counts[i] - expect) / expect;
      ++cells;
    }
    // One positive arm: nothing to test beyond zero_hits.
    if (cells < 2) continue;
    const boost::math::chi_squared dist(cells - 1);
    worst_p = std::min(worst_p, boost::math::cdf(boost::math::complement(dist, chi2)));
  }
  report("sampling-proportionality", worst_p > kChiSquaredMinP && zero_hits == 0,
         fmt("%d LP vectors x %d draws, smallest chi-squared p %.4f (need > %.3f), zero-LP arms drawn: %d",
             kLpVectors, kLpDraws, worst_p, kChiSquaredMinP, zero_hits));
}

void trace_persistence() {
  RandomStream rng(4242);
  int bad = 0;
  for (int i = 0; i < kPersistTraces; ++i) {
    const auto t = test_support::random_trace(rng, 1 + i % 3);
    const std::string first = serialize_trace(t);
    const std::string second = serialize_trace(parse_trace(first));
    if (first != second) ++bad;
  }
  report("trace-persistence", bad == 0, fmt("%d random traces, %d not byte-identical after save-load-save", kPersistTraces, bad));
}

void welch_reference() {
  double worst = 0.0;
  for (const auto& c : welch_ref::cases()) worst = std::max(worst, std::abs(welch_t_test(c.a, c.b).p - c.p));
  report("welch-reference", welch_ref::cases().size() >= 3 && worst <= kWelchTol,
         fmt("%zu datasets, max |p - reference| = %.2e (tol %.0e)", welch_ref::cases().size(), worst, kWelchTol));
}

std::string csv(const RunResult& r) {
  std::ostringstream os;
  write_run_csv(os, r);
  return os.str();
}

void ordering_and_determinism() {
  ExperimentConfig c;  // weak profile, 20000 episodes, seeds 0..29
  c.conditions = {Condition::parse("ALP-GMM"), Condition::parse("Random"), Condition::parse("AGAIN-R"),
                  Condition::parse("AGAIN-R(fine-tune)")};
  const auto t0 = Clock::now();
  const auto runs = run_sweep(c);
  const double s = seconds_since(t0);
  std::size_t failed = 0;
  for (const auto& r : runs) failed += r.failed;
  const auto summary = summarize(runs);
  auto row = [&](const char* name) {
    for (const auto& x : summary)
      if (x.condition == name) return x;
    return ConditionSummary{};
  };
  const auto alp = row("ALP-GMM"), rnd = row("Random"), again = row("AGAIN-R"), ft = row("AGAIN-R(fine-tune)");
  std::fputs(format_table(summary).c_str(), stdout);

  const double p_rnd = rnd.p_vs_alpgmm.value_or(1.0);
  report("ordering-alpgmm-beats-random", failed == 0 && alp.mean > rnd.mean && p_rnd < kSignificance,
         fmt("ALP-GMM %.1f%% vs Random %.1f%%, Welch p = %.3g (need < %.2f)", alp.mean, rnd.mean, p_rnd, kSignificance));
  report("ordering-again-vs-alpgmm", failed == 0 && again.mean >= alp.mean,
         fmt("AGAIN-R %.2f%% vs ALP-GMM %.2f%% (need >=)", again.mean, alp.mean));
  report("ordering-scratch-vs-finetune", failed == 0 && again.mean >= ft.mean,
         fmt("scratch %.2f%% vs fine-tune %.2f%% (need >=)", again.mean, ft.mean));
  report("ordering-sweep-runtime", s <= kSweepSeconds,
         fmt("%zu runs x %zu episodes in %.0fs (limit %.0fs), %zu failed", runs.size(), c.budget, s, kSweepSeconds, failed));

  // Determinism: repeat seed 0 of every condition and compare the CSV bytes.
  int same = 0, total = 0;
  for (const auto& r : runs) {
    if (r.seed != 0) continue;
    ++total;
    same += csv(run_condition(c, Condition::parse(r.condition), r.seed)) == csv(r);
  }
  report("determinism", same == total && total == 4, fmt("%d/%d repeated runs byte-identical", same, total));
}

}  // namespace

int main() {
  alp_oracle_equivalence();
  gmm_recovery_and_em_monotonicity();
  filter_contract();
  stepping_rules();
  sampling_proportionality();
  trace_persistence();
  welch_reference();
  ordering_and_determinism();
  std::printf("%s: %d criterion line(s) failed\n", failures ? "FAILED" : "OK", failures);
  return failures ? 1 : 0;
}
