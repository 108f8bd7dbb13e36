#include "acl/stats.hpp"

#include <cmath>
#include <numeric>

#include <boost/math/distributions/students_t.hpp>

#include "acl/errors.hpp"

namespace acl {

double mean(std::span<const double> xs) {
  if (xs.empty()) throw ContractError("mean of an empty sample");
  return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

double sample_variance(std::span<const double> xs) {
  if (xs.size() < 2) throw ContractError("sample variance needs at least 2 values");
  const double m = mean(xs);
  double ss = 0.0;
  for (double x : xs) ss += (x - m) * (x - m);
  return ss / static_cast<double>(xs.size() - 1);
}

double sample_std(std::span<const double> xs) { return std::sqrt(sample_variance(xs)); }

double standard_error(std::span<const double> xs) {
  return sample_std(xs) / std::sqrt(static_cast<double>(xs.size()));
}

WelchResult welch_t_test(std::span<const double> a, std::span<const double> b) {
  if (a.size() < 2 || b.size() < 2) throw ContractError("Welch's t-test needs >= 2 values per sample");
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  const double va = sample_variance(a) / na;
  const double vb = sample_variance(b) / nb;
  if (!(va + vb > 0.0)) throw ContractError("Welch's t-test: both samples have zero variance");

  WelchResult r;
  r.t = (mean(a) - mean(b)) / std::sqrt(va + vb);
  r.df = (va + vb) * (va + vb) / (va * va / (na - 1.0) + vb * vb / (nb - 1.0));
  if (r.t == 0.0) {
    r.p = 1.0;
    return r;
  }
  const boost::math::students_t dist(r.df);
  r.p = 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(r.t)));
  return r;
}

std::optional<WelchResult> try_welch_t_test(std::span<const double> a, std::span<const double> b) {
  try {
    return welch_t_test(a, b);
  } catch (const ContractError&) {
    return std::nullopt;
  }
}

}  // namespace acl
