#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace acl {

// Seeded random stream with platform-independent output. std::mt19937_64 is
// fully specified by the standard; the distributions below are written out
// instead of using <random>'s implementation-defined ones.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed = 0);

  std::uint64_t seed() const { return seed_; }

  std::uint64_t next_u64() { return engine_(); }

  // Uniform in [0, 1).
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform integer in [0, n).
  std::size_t index(std::size_t n);

  double normal();

  // Independent child stream keyed by a tag. Does not advance this stream.
  RandomStream derive(std::string_view tag) const;
  RandomStream derive(std::uint64_t key) const;

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace acl
