#pragma once

#include <cstddef>
#include <cstdint>
#include <deque>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "acl/task_space.hpp"

namespace acl {

// Approximate reward range used to normalize ALP into [0,1].
struct RewardSpan {
  double min = -150.0;
  double max = 350.0;

  double width() const { return max - min; }
  double clamp(double r) const;
  bool contains(double r) const { return r >= min && r <= max; }
  // Throws ConfigError unless max > min.
  void validate() const;
  bool operator==(const RewardSpan&) const = default;
};

struct HistoryRecord {
  std::vector<double> params_norm;
  double reward = 0.0;
  double alp_norm = 0.0;
};

// Append-only (params, reward) store with exact nearest-neighbour lookup.
// Large histories are bucketed on a uniform grid over the first few
// normalized dimensions; lookups stay exact, ties resolve to the earliest
// record.
class HistoryDb {
 public:
  explicit HistoryDb(std::size_t dims);

  std::size_t dims() const { return dims_; }
  std::size_t size() const { return records_.size(); }
  bool empty() const { return records_.empty(); }
  const HistoryRecord& operator[](std::size_t i) const { return records_[i]; }
  const std::vector<HistoryRecord>& records() const { return records_; }

  void append(std::span<const double> params_norm, double reward, double alp_norm = 0.0);

  std::optional<std::size_t> nearest(std::span<const double> query) const;

 private:
  std::size_t cell_of(std::span<const double> p) const;
  double squared_distance(std::span<const double> q, std::size_t record) const;

  std::size_t dims_;
  std::size_t grid_dims_;
  std::size_t bins_;
  std::vector<HistoryRecord> records_;
  std::vector<std::vector<std::uint32_t>> buckets_;
};

// |r_new - r_old| / span width against the single nearest prior record;
// 0 for an empty history. Both rewards are clamped into the span first.
double compute_alp(std::span<const double> params_norm, double reward, const HistoryDb& db,
                   const RewardSpan& span);

// FIFO of the N most recent (params ++ alp) rows.
class AlpWindow {
 public:
  explicit AlpWindow(std::size_t capacity);

  std::size_t capacity() const { return capacity_; }
  std::size_t size() const { return rows_.size(); }
  bool full() const { return rows_.size() == capacity_; }
  const std::deque<std::vector<double>>& rows() const { return rows_; }

  void push(std::vector<double> row);
  // size x (d+1), oldest first.
  Eigen::MatrixXd to_matrix() const;

 private:
  std::size_t capacity_;
  std::deque<std::vector<double>> rows_;
};

struct EpisodeRecord {
  std::vector<double> params_norm;
  double reward = 0.0;
  double alp_norm = 0.0;
};

class AlpTracker {
 public:
  AlpTracker(std::size_t dims, std::size_t window_capacity, RewardSpan span);

  // ALP is computed against the history before the new episode is added.
  EpisodeRecord record(std::span<const double> params_norm, double reward);

  const HistoryDb& history() const { return db_; }
  const AlpWindow& window() const { return window_; }
  const RewardSpan& span() const { return span_; }
  // Rewards that fell outside the declared span and were clamped.
  std::size_t out_of_span_count() const { return out_of_span_; }

 private:
  HistoryDb db_;
  AlpWindow window_;
  RewardSpan span_;
  std::size_t out_of_span_ = 0;
};

// CSV: episode, raw params..., reward, alp_norm.
void write_history_csv(std::ostream& os, const HistoryDb& db, const TaskSpace& space);

}  // namespace acl
