#include "acl/surrogate_student.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numbers>

#include "acl/errors.hpp"

namespace acl {
namespace {

// Visits every coordinate vector in the box [lo, hi] (inclusive).
template <typename F>
void for_each_in_box(const std::vector<long>& lo, const std::vector<long>& hi, F&& f) {
  std::vector<long> c = lo;
  for (std::size_t i = 0; i < c.size(); ++i)
    if (lo[i] > hi[i]) return;
  while (true) {
    f(c);
    std::size_t i = 0;
    while (i < c.size() && c[i] == hi[i]) {
      c[i] = lo[i];
      ++i;
    }
    if (i == c.size()) return;
    ++c[i];
  }
}

}  // namespace

std::string to_string(ResetMode m) { return m == ResetMode::Scratch ? "scratch" : "fine_tune"; }

ResetMode parse_reset_mode(std::string_view s) {
  if (s == "scratch") return ResetMode::Scratch;
  if (s == "fine_tune" || s == "fine-tune" || s == "finetune") return ResetMode::FineTune;
  throw ConfigError("unknown reset mode '" + std::string(s) + "'");
}

SurrogateProfile SurrogateProfile::strong() { return SurrogateProfile{}; }

SurrogateProfile SurrogateProfile::weak() {
  SurrogateProfile p;
  p.name = "weak";
  p.mask_base = 0.10;
  p.mask_slope = 0.30;
  return p;
}

SurrogateProfile SurrogateProfile::by_name(std::string_view name) {
  if (name == "strong" || name == "default") return strong();
  if (name == "weak" || name == "short") return weak();
  throw ConfigError("unknown student profile '" + std::string(name) + "'");
}

SurrogateStudent::SurrogateStudent(TaskSpace space, SurrogateProfile profile, std::uint64_t seed)
    : space_(std::move(space)),
      profile_(std::move(profile)),
      seed_(seed),
      dims_(space_.dims()),
      rng_(RandomStream(seed).derive("student.noise")) {
  profile_.span.validate();
  if (dims_ > 3) throw ConfigError("surrogate student supports at most 3 task dimensions");
  if (profile_.grid < 2) throw ConfigError("surrogate grid needs at least 2 cells per dimension");
  if (!(profile_.learn_rate > 0.0 && profile_.learn_rate <= 1.0))
    throw ConfigError("surrogate learn rate must lie in (0,1]");
  if (!(profile_.frontier_width > 0.0)) throw ConfigError("frontier width must be positive");
  if (!(profile_.prerequisite_level > 0.0 && profile_.prerequisite_level <= 1.0))
    throw ConfigError("prerequisite level must lie in (0,1]");
  reach_cells_ = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::lround(profile_.frontier_width * static_cast<double>(profile_.grid))));
  std::size_t cells = 1;
  for (std::size_t i = 0; i < dims_; ++i) cells *= profile_.grid;
  competence_.assign(cells, 0.0);
  mask_.resize(cells);
  for (std::size_t f = 0; f < cells; ++f) {
    const auto c = cell_center(f);
    const double limit = profile_.mask_base + (dims_ > 1 ? profile_.mask_slope * c[1] : 0.0);
    mask_[f] = c[0] <= limit ? 1 : 0;
  }
}

std::vector<std::size_t> SurrogateStudent::cell_coords(const TaskParams& raw) const {
  const TaskParams unit = space_.normalize(raw);
  std::vector<std::size_t> out(dims_);
  const double g = static_cast<double>(profile_.grid);
  for (std::size_t i = 0; i < dims_; ++i)
    out[i] = static_cast<std::size_t>(std::clamp(std::floor(unit[i] * g), 0.0, g - 1.0));
  return out;
}

std::size_t SurrogateStudent::flat(const std::vector<std::size_t>& coords) const {
  std::size_t f = 0;
  for (std::size_t i = 0; i < dims_; ++i) f = f * profile_.grid + coords[i];
  return f;
}

std::vector<double> SurrogateStudent::cell_center(std::size_t flat_index) const {
  std::vector<double> c(dims_);
  for (std::size_t i = dims_; i-- > 0;) {
    c[i] = (static_cast<double>(flat_index % profile_.grid) + 0.5) / static_cast<double>(profile_.grid);
    flat_index /= profile_.grid;
  }
  return c;
}

bool SurrogateStudent::cell_learnable(const std::vector<std::size_t>& coords) const {
  return mask_[flat(coords)] != 0;
}

bool SurrogateStudent::in_frontier(const std::vector<std::size_t>& coords) const {
  if (coords[0] < reach_cells_) return true;
  const auto reach = static_cast<long>(reach_cells_);
  const auto last = static_cast<long>(profile_.grid) - 1;
  std::vector<long> lo(dims_), hi(dims_);
  lo[0] = static_cast<long>(coords[0]) - reach;
  hi[0] = static_cast<long>(coords[0]) - 1;
  for (std::size_t i = 1; i < dims_; ++i) {
    lo[i] = std::max(0L, static_cast<long>(coords[i]) - reach);
    hi[i] = std::min(last, static_cast<long>(coords[i]) + reach);
  }
  double prereq = 0.0;
  std::vector<std::size_t> u(dims_);
  for_each_in_box(lo, hi, [&](const std::vector<long>& c) {
    for (std::size_t i = 0; i < dims_; ++i) u[i] = static_cast<std::size_t>(c[i]);
    prereq = std::max(prereq, competence_[flat(u)]);
  });
  const double own = competence_[flat(coords)];
  return prereq >= std::min(profile_.prerequisite_level, own + profile_.frontier_width);
}

double SurrogateStudent::plasticity() const {
  if (!(profile_.clutter_scale > 0.0)) return 1.0;
  return 1.0 / (1.0 + static_cast<double>(infeasible_) / profile_.clutter_scale);
}

double SurrogateStudent::reward_for(double competence, bool learnable_task, double noise) const {
  const auto& s = profile_.span;
  const double base = learnable_task ? s.min + competence * s.width() : s.min;
  return base + noise * profile_.noise_fraction * s.width();
}

bool SurrogateStudent::learnable(const TaskParams& params) const {
  return cell_learnable(cell_coords(params));
}

double SurrogateStudent::competence_at(const TaskParams& params) const {
  return competence_[flat(cell_coords(params))];
}

double SurrogateStudent::evaluate(const TaskParams& params) { return evaluate_pure(params); }

double SurrogateStudent::evaluate_pure(const TaskParams& params) const {
  if (!space_.contains(params)) throw ContractError("surrogate evaluate: params out of bounds");
  // Noise is a pure function of (seed, params) so evaluation has no side effects.
  std::uint64_t h = splitmix64(seed_ ^ 0x5eed5eed5eedULL);
  for (double v : params.values) h = splitmix64(h ^ std::bit_cast<std::uint64_t>(v));
  const double u1 = (static_cast<double>(h >> 11) + 1.0) * 0x1.0p-53;
  const double u2 = static_cast<double>(splitmix64(h) >> 11) * 0x1.0p-53;
  const double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  const auto coords = cell_coords(params);
  return reward_for(competence_[flat(coords)], cell_learnable(coords), z);
}

double SurrogateStudent::train_on(const TaskParams& params) {
  if (!space_.contains(params)) throw ContractError("surrogate train_on: params out of bounds");
  const auto coords = cell_coords(params);
  if (!cell_learnable(coords)) {
    ++infeasible_;
    return reward_for(0.0, false, rng_.normal());
  }

  const TaskParams unit = space_.normalize(params);
  const double g = static_cast<double>(profile_.grid);
  const double sigma = profile_.kernel_sigma;
  const auto radius = static_cast<long>(std::ceil(3.0 * sigma));
  const auto last = static_cast<long>(profile_.grid) - 1;
  std::vector<long> lo(dims_), hi(dims_);
  for (std::size_t i = 0; i < dims_; ++i) {
    lo[i] = std::max(0L, static_cast<long>(coords[i]) - radius);
    hi[i] = std::min(last, static_cast<long>(coords[i]) + radius);
  }

  // Frontier membership is judged on the pre-update field.
  const double rate = profile_.learn_rate * plasticity();
  std::vector<std::pair<std::size_t, double>> updates;
  std::vector<std::size_t> u(dims_);
  for_each_in_box(lo, hi, [&](const std::vector<long>& c) {
    double d2 = 0.0;
    for (std::size_t i = 0; i < dims_; ++i) {
      u[i] = static_cast<std::size_t>(c[i]);
      const double diff = (static_cast<double>(c[i]) + 0.5) - unit[i] * g;
      d2 += diff * diff;
    }
    if (d2 > static_cast<double>(radius * radius)) return;
    if (!cell_learnable(u) || !in_frontier(u)) return;
    const std::size_t f = flat(u);
    const double k = std::exp(-d2 / (2.0 * sigma * sigma));
    updates.emplace_back(f, rate * k * (1.0 - competence_[f]));
  });
  for (const auto& [f, delta] : updates) competence_[f] = std::min(1.0, competence_[f] + delta);

  return reward_for(competence_[flat(coords)], true, rng_.normal());
}

void SurrogateStudent::reset(ResetMode mode) {
  if (mode == ResetMode::FineTune) return;
  std::fill(competence_.begin(), competence_.end(), 0.0);
  infeasible_ = 0;
  rng_ = RandomStream(seed_).derive("student.noise");
}

double SurrogateStudent::mean_competence(
    const std::function<bool(const std::vector<double>&)>& region) const {
  double sum = 0.0;
  std::size_t n = 0;
  for (std::size_t f = 0; f < competence_.size(); ++f) {
    if (!mask_[f]) continue;
    if (!region(cell_center(f))) continue;
    sum += competence_[f];
    ++n;
  }
  return n == 0 ? std::numeric_limits<double>::quiet_NaN() : sum / static_cast<double>(n);
}

}  // namespace acl
