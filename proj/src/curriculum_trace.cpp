#include "acl/curriculum_trace.hpp"

#include <algorithm>
#include <cinttypes>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <numeric>
#include <sstream>

#include <boost/crc.hpp>

#include "acl/errors.hpp"

namespace acl {
namespace {

constexpr std::string_view kMagic = "acl-curriculum-trace";
constexpr int kVersion = 1;

std::uint32_t crc32_of(std::string_view bytes) {
  boost::crc_32_type crc;
  crc.process_bytes(bytes.data(), bytes.size());
  return crc.checksum();
}

void put_hex(std::string& out, double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, " %a", v);
  out += buf;
}

class Reader {
 public:
  explicit Reader(std::string_view body) : in_(std::string(body)) {}

  // Next line, split on whitespace, must begin with `key`.
  std::vector<std::string> expect(std::string_view key) {
    std::string line;
    if (!std::getline(in_, line)) throw FormatError("trace truncated: expected '" + std::string(key) + "'");
    ++line_no_;
    std::istringstream ls(line);
    std::vector<std::string> tokens;
    for (std::string t; ls >> t;) tokens.push_back(t);
    if (tokens.empty() || tokens[0] != key)
      throw FormatError("trace line " + std::to_string(line_no_) + ": expected '" +
                        std::string(key) + "'");
    tokens.erase(tokens.begin());
    return tokens;
  }

  static double real(const std::string& token) {
    char* end = nullptr;
    const double v = std::strtod(token.c_str(), &end);
    if (end == token.c_str() || *end != '\0') throw FormatError("bad number in trace: " + token);
    return v;
  }

  static long long integer(const std::string& token) {
    char* end = nullptr;
    const long long v = std::strtoll(token.c_str(), &end, 0);
    if (end == token.c_str() || *end != '\0') throw FormatError("bad integer in trace: " + token);
    return v;
  }

  static std::vector<double> reals(const std::vector<std::string>& tokens, std::size_t count) {
    if (tokens.size() != count)
      throw FormatError("trace row has " + std::to_string(tokens.size()) + " values, expected " +
                        std::to_string(count));
    std::vector<double> out;
    out.reserve(count);
    for (const auto& t : tokens) out.push_back(real(t));
    return out;
  }

 private:
  std::istringstream in_;
  int line_no_ = 0;
};

}  // namespace

void CurriculumTrace::validate() const {
  if (snapshots.size() != reward_means.size())
    throw FormatError("trace has " + std::to_string(snapshots.size()) + " snapshots but " +
                      std::to_string(reward_means.size()) + " reward means");
  if (meta.lower.size() != meta.upper.size() || meta.lower.empty())
    throw FormatError("trace bounds are malformed");
  const auto dim = static_cast<Eigen::Index>(meta.dims() + 1);
  for (std::size_t t = 0; t < snapshots.size(); ++t) {
    if (t > 0 && snapshots[t].fit_episode <= snapshots[t - 1].fit_episode)
      throw FormatError("trace snapshots are not ordered by fit episode");
    for (const auto& g : snapshots[t].components)
      if (g.mean.size() != dim || g.covariance.rows() != dim || g.covariance.cols() != dim)
        throw FormatError("trace component has wrong dimension");
  }
}

FilteredCurriculum filter(const CurriculumTrace& trace, double delta_lp) {
  FilteredCurriculum out;
  out.meta = trace.meta;
  for (std::size_t t = 0; t < trace.snapshots.size(); ++t) {
    GmmSnapshot kept;
    kept.fit_episode = trace.snapshots[t].fit_episode;
    kept.degenerate = trace.snapshots[t].degenerate;
    for (const auto& g : trace.snapshots[t].components)
      if (g.lp() >= delta_lp) kept.components.push_back(g);
    if (kept.empty()) continue;
    out.snapshots.push_back(std::move(kept));
    out.thresholds.push_back(trace.reward_means[t]);
  }
  return out;
}

double record_reward_mean(std::span<const double> rewards) {
  if (rewards.empty()) throw ContractError("no rewards recorded under this snapshot");
  const auto tail = rewards.size() > kRewardMemory ? rewards.last(kRewardMemory) : rewards;
  return std::accumulate(tail.begin(), tail.end(), 0.0) / static_cast<double>(tail.size());
}

TraceRecorder::TraceRecorder(TraceMeta meta) { closed_.meta = std::move(meta); }

void TraceRecorder::on_reward(double reward) {
  auto& ring = open_ ? ring_ : pre_fit_ring_;
  ring.push_back(reward);
  if (ring.size() > kRewardMemory) ring.erase(ring.begin());
}

double TraceRecorder::closing_mean() const {
  if (!ring_.empty()) return record_reward_mean(ring_);
  // A snapshot that served no episode inherits the previous threshold.
  if (!closed_.reward_means.empty()) return closed_.reward_means.back();
  if (!pre_fit_ring_.empty()) return record_reward_mean(pre_fit_ring_);
  return closed_.meta.reward_span.min;
}

void TraceRecorder::on_fit(GmmSnapshot snapshot) {
  if (open_) {
    closed_.reward_means.push_back(closing_mean());
    closed_.snapshots.push_back(std::move(*open_));
  }
  open_ = std::move(snapshot);
  ring_.clear();
}

CurriculumTrace TraceRecorder::trace() const {
  CurriculumTrace out = closed_;
  if (open_) {
    out.reward_means.push_back(closing_mean());
    out.snapshots.push_back(*open_);
  }
  return out;
}

std::string serialize_trace(const CurriculumTrace& trace) {
  trace.validate();
  std::string out;
  out += std::string(kMagic) + " v" + std::to_string(kVersion) + "\n";
  out += "dims " + std::to_string(trace.meta.dims()) + "\n";
  out += "lower";
  for (double v : trace.meta.lower) put_hex(out, v);
  out += "\nupper";
  for (double v : trace.meta.upper) put_hex(out, v);
  out += "\nreward_span";
  put_hex(out, trace.meta.reward_span.min);
  put_hex(out, trace.meta.reward_span.max);
  char buf[64];
  std::snprintf(buf, sizeof buf, "\nconfig_hash 0x%016" PRIx64 "\nseed %" PRIu64 "\n",
                trace.meta.config_hash, trace.meta.seed);
  out += buf;
  out += "snapshots " + std::to_string(trace.size()) + "\n";
  for (std::size_t t = 0; t < trace.size(); ++t) {
    const auto& s = trace.snapshots[t];
    std::snprintf(buf, sizeof buf, "snapshot %" PRId64 " %zu %d", s.fit_episode, s.size(),
                  s.degenerate ? 1 : 0);
    out += buf;
    put_hex(out, trace.reward_means[t]);
    out += "\n";
    for (const auto& g : s.components) {
      out += "component";
      put_hex(out, g.mixture_weight);
      out += "\nmean";
      for (Eigen::Index i = 0; i < g.mean.size(); ++i) put_hex(out, g.mean[i]);
      out += "\ncov";
      for (Eigen::Index r = 0; r < g.covariance.rows(); ++r)
        for (Eigen::Index c = 0; c < g.covariance.cols(); ++c) put_hex(out, g.covariance(r, c));
      out += "\n";
    }
  }
  out += "end\n";
  std::snprintf(buf, sizeof buf, "crc32 %08" PRIx32 "\n", crc32_of(out));
  out += buf;
  return out;
}

CurriculumTrace parse_trace(std::string_view text, const TaskSpace* expected) {
  const std::string_view end_marker = "end\n";
  const auto end_pos = text.rfind(end_marker);
  if (end_pos == std::string_view::npos) throw FormatError("trace has no end marker");
  const std::string_view body = text.substr(0, end_pos + end_marker.size());
  const std::string_view trailer = text.substr(end_pos + end_marker.size());

  {
    std::istringstream magic_line{std::string(body.substr(0, body.find('\n')))};
    std::string magic, version;
    magic_line >> magic >> version;
    if (magic != kMagic) throw FormatError("not a curriculum trace file");
    if (version != "v" + std::to_string(kVersion))
      throw FormatError("unsupported trace version '" + version + "'");
  }
  {
    unsigned stored = 0;
    if (std::sscanf(std::string(trailer).c_str(), "crc32 %8x", &stored) != 1)
      throw FormatError("trace checksum line missing");
    if (stored != crc32_of(body)) throw FormatError("trace checksum mismatch (file corrupted)");
  }

  Reader rd(body.substr(body.find('\n') + 1));
  CurriculumTrace trace;
  const auto dims_tok = rd.expect("dims");
  if (dims_tok.size() != 1) throw FormatError("bad dims line");
  const auto dims = static_cast<std::size_t>(Reader::integer(dims_tok[0]));
  if (dims == 0) throw FormatError("trace has zero dims");
  trace.meta.lower = Reader::reals(rd.expect("lower"), dims);
  trace.meta.upper = Reader::reals(rd.expect("upper"), dims);
  const auto span = Reader::reals(rd.expect("reward_span"), 2);
  trace.meta.reward_span = {span[0], span[1]};
  const auto hash_tok = rd.expect("config_hash");
  const auto seed_tok = rd.expect("seed");
  if (hash_tok.size() != 1 || seed_tok.size() != 1) throw FormatError("bad meta line");
  trace.meta.config_hash = std::strtoull(hash_tok[0].c_str(), nullptr, 16);
  trace.meta.seed = std::strtoull(seed_tok[0].c_str(), nullptr, 10);

  if (expected) {
    if (expected->dims() != dims)
      throw FormatError("trace has " + std::to_string(dims) + " task dims, run expects " +
                        std::to_string(expected->dims()));
    if (expected->lower() != trace.meta.lower || expected->upper() != trace.meta.upper)
      throw FormatError("trace task-space bounds differ from the run's bounds");
  }

  const auto count_tok = rd.expect("snapshots");
  if (count_tok.size() != 1) throw FormatError("bad snapshots line");
  const auto count = static_cast<std::size_t>(Reader::integer(count_tok[0]));
  const auto dim = static_cast<Eigen::Index>(dims + 1);
  for (std::size_t t = 0; t < count; ++t) {
    const auto head = rd.expect("snapshot");
    if (head.size() != 4) throw FormatError("bad snapshot header");
    GmmSnapshot s;
    s.fit_episode = Reader::integer(head[0]);
    const auto k = static_cast<std::size_t>(Reader::integer(head[1]));
    s.degenerate = Reader::integer(head[2]) != 0;
    trace.reward_means.push_back(Reader::real(head[3]));
    for (std::size_t j = 0; j < k; ++j) {
      WeightedGaussian g;
      g.mixture_weight = Reader::reals(rd.expect("component"), 1)[0];
      const auto mean = Reader::reals(rd.expect("mean"), static_cast<std::size_t>(dim));
      g.mean = Eigen::Map<const Eigen::VectorXd>(mean.data(), dim);
      const auto cov = Reader::reals(rd.expect("cov"), static_cast<std::size_t>(dim * dim));
      g.covariance = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                                                    Eigen::RowMajor>>(cov.data(), dim, dim);
      s.components.push_back(std::move(g));
    }
    trace.snapshots.push_back(std::move(s));
  }
  rd.expect("end");
  trace.validate();
  return trace;
}

void save_trace(const CurriculumTrace& trace, const std::filesystem::path& path) {
  const std::string text = serialize_trace(trace);
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw std::runtime_error("cannot write trace to " + path.string());
  os.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!os) throw std::runtime_error("failed writing trace to " + path.string());
}

CurriculumTrace load_trace(const std::filesystem::path& path, const TaskSpace* expected) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw FormatError("cannot open trace " + path.string());
  std::ostringstream ss;
  ss << is.rdbuf();
  return parse_trace(ss.str(), expected);
}

}  // namespace acl
