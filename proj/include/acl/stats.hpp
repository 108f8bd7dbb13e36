#pragma once

#include <optional>
#include <span>

namespace acl {

double mean(std::span<const double> xs);
// Unbiased (n-1) variance.
double sample_variance(std::span<const double> xs);
double sample_std(std::span<const double> xs);
double standard_error(std::span<const double> xs);

struct WelchResult {
  double t = 0.0;
  double df = 0.0;  // Welch-Satterthwaite
  double p = 1.0;   // two-sided
};

// Unequal-variance two-sample t-test. Needs at least 2 values per sample and
// nonzero variance in at least one; throws ContractError otherwise.
WelchResult welch_t_test(std::span<const double> a, std::span<const double> b);

// Same, but degenerate samples give nullopt instead of throwing.
std::optional<WelchResult> try_welch_t_test(std::span<const double> a, std::span<const double> b);

}  // namespace acl
