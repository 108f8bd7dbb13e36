#include "acl/alp_tracker.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>

#include "acl/errors.hpp"

namespace acl {
namespace {

// Below this many records a plain scan beats walking grid rings.
constexpr std::size_t kIndexThreshold = 64;

}  // namespace

double RewardSpan::clamp(double r) const { return std::clamp(r, min, max); }

void RewardSpan::validate() const {
  if (!(max > min) || !std::isfinite(min) || !std::isfinite(max))
    throw ConfigError("reward span needs finite min < max");
}

HistoryDb::HistoryDb(std::size_t dims) : dims_(dims) {
  if (dims == 0) throw ConfigError("history needs at least one dimension");
  grid_dims_ = std::min<std::size_t>(dims, 3);
  bins_ = grid_dims_ == 1 ? 256 : grid_dims_ == 2 ? 64 : 16;
  std::size_t cells = 1;
  for (std::size_t i = 0; i < grid_dims_; ++i) cells *= bins_;
  buckets_.resize(cells);
}

std::size_t HistoryDb::cell_of(std::span<const double> p) const {
  std::size_t cell = 0;
  for (std::size_t i = 0; i < grid_dims_; ++i) {
    const double scaled = std::floor(p[i] * static_cast<double>(bins_));
    const auto b = static_cast<std::size_t>(
        std::clamp(scaled, 0.0, static_cast<double>(bins_ - 1)));
    cell = cell * bins_ + b;
  }
  return cell;
}

double HistoryDb::squared_distance(std::span<const double> q, std::size_t record) const {
  const auto& p = records_[record].params_norm;
  double d2 = 0.0;
  for (std::size_t i = 0; i < dims_; ++i) {
    const double diff = q[i] - p[i];
    d2 += diff * diff;
  }
  return d2;
}

void HistoryDb::append(std::span<const double> params_norm, double reward, double alp_norm) {
  if (params_norm.size() != dims_) throw ContractError("history record has wrong dimension");
  records_.push_back({{params_norm.begin(), params_norm.end()}, reward, alp_norm});
  buckets_[cell_of(params_norm)].push_back(static_cast<std::uint32_t>(records_.size() - 1));
}

std::optional<std::size_t> HistoryDb::nearest(std::span<const double> query) const {
  if (query.size() != dims_) throw ContractError("nearest: query has wrong dimension");
  if (records_.empty()) return std::nullopt;

  std::size_t best = 0;
  double best_d2 = squared_distance(query, 0);
  auto consider = [&](std::size_t idx) {
    const double d2 = squared_distance(query, idx);
    if (d2 < best_d2 || (d2 == best_d2 && idx < best)) {
      best_d2 = d2;
      best = idx;
    }
  };

  if (records_.size() < kIndexThreshold) {
    for (std::size_t i = 1; i < records_.size(); ++i) consider(i);
    return best;
  }

  // Walk Chebyshev rings of grid cells outward from the query cell. Anything
  // beyond ring r lies further than r * cell_width along some indexed axis.
  const auto bins = static_cast<long>(bins_);
  std::vector<long> center(grid_dims_);
  {
    std::size_t cell = cell_of(query);
    for (std::size_t i = grid_dims_; i-- > 0;) {
      center[i] = static_cast<long>(cell % bins_);
      cell /= bins_;
    }
  }
  const double h = 1.0 / static_cast<double>(bins_);
  std::vector<long> offset(grid_dims_);
  for (long r = 0; r <= bins; ++r) {
    std::fill(offset.begin(), offset.end(), -r);
    while (true) {
      long cheb = 0;
      bool inside = true;
      std::size_t cell = 0;
      for (std::size_t i = 0; i < grid_dims_; ++i) {
        cheb = std::max(cheb, std::labs(offset[i]));
        const long c = center[i] + offset[i];
        if (c < 0 || c >= bins) inside = false;
        cell = cell * bins_ + static_cast<std::size_t>(std::max(c, 0L));
      }
      if (inside && cheb == r)
        for (std::uint32_t idx : buckets_[cell]) consider(idx);
      std::size_t i = 0;
      while (i < grid_dims_ && offset[i] == r) offset[i++] = -r;
      if (i == grid_dims_) break;
      ++offset[i];
    }
    const double bound = static_cast<double>(r) * h;
    if (best_d2 < bound * bound * (1.0 - 1e-9)) break;
  }
  return best;
}

double compute_alp(std::span<const double> params_norm, double reward, const HistoryDb& db,
                   const RewardSpan& span) {
  span.validate();
  const auto idx = db.nearest(params_norm);
  if (!idx) return 0.0;
  const double diff = std::abs(span.clamp(reward) - span.clamp(db[*idx].reward));
  return std::clamp(diff / span.width(), 0.0, 1.0);
}

AlpWindow::AlpWindow(std::size_t capacity) : capacity_(capacity) {
  if (capacity == 0) throw ConfigError("ALP window capacity must be positive");
}

void AlpWindow::push(std::vector<double> row) {
  if (rows_.size() == capacity_) rows_.pop_front();
  rows_.push_back(std::move(row));
}

Eigen::MatrixXd AlpWindow::to_matrix() const {
  if (rows_.empty()) return {};
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows_.size()),
                    static_cast<Eigen::Index>(rows_.front().size()));
  for (std::size_t i = 0; i < rows_.size(); ++i)
    for (std::size_t j = 0; j < rows_[i].size(); ++j)
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows_[i][j];
  return m;
}

AlpTracker::AlpTracker(std::size_t dims, std::size_t window_capacity, RewardSpan span)
    : db_(dims), window_(window_capacity), span_(span) {
  span_.validate();
}

EpisodeRecord AlpTracker::record(std::span<const double> params_norm, double reward) {
  if (!span_.contains(reward)) ++out_of_span_;
  const double alp = compute_alp(params_norm, reward, db_, span_);
  db_.append(params_norm, reward, alp);
  std::vector<double> row(params_norm.begin(), params_norm.end());
  row.push_back(alp);
  window_.push(std::move(row));
  return {{params_norm.begin(), params_norm.end()}, reward, alp};
}

void write_history_csv(std::ostream& os, const HistoryDb& db, const TaskSpace& space) {
  os << "episode";
  for (std::size_t i = 0; i < space.dims(); ++i) os << ",param" << i;
  os << ",reward,alp_norm\n";
  char buf[64];
  for (std::size_t e = 0; e < db.size(); ++e) {
    const auto& rec = db[e];
    os << e + 1;
    const TaskParams raw = space.denormalize(TaskParams{rec.params_norm});
    for (double v : raw.values) {
      std::snprintf(buf, sizeof buf, ",%.9g", v);
      os << buf;
    }
    std::snprintf(buf, sizeof buf, ",%.9g,%.9g\n", rec.reward, rec.alp_norm);
    os << buf;
  }
}

}  // namespace acl
