#include "acl/gmm.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "acl/errors.hpp"

namespace acl {
namespace {

constexpr double kLog2Pi = 1.8378770664093454835606594728112;

// Cholesky of a covariance, retrying with a growing diagonal jitter if
// roundoff pushed it off the SPD cone.
Eigen::LLT<Eigen::MatrixXd> robust_cholesky(const Eigen::MatrixXd& cov, double floor) {
  Eigen::LLT<Eigen::MatrixXd> llt(cov);
  double jitter = floor;
  while (llt.info() != Eigen::Success) {
    llt.compute(cov + jitter * Eigen::MatrixXd::Identity(cov.rows(), cov.cols()));
    jitter *= 10.0;
    if (jitter > 1e6) throw std::runtime_error("covariance is not positive definite");
  }
  return llt;
}

// log(w_j) + log N(x_i | mu_j, Sigma_j) for every point (rows) and component (cols).
Eigen::MatrixXd weighted_log_densities(const GmmSnapshot& model, const Eigen::MatrixXd& xt,
                                       double floor) {
  const Eigen::Index dim = xt.rows();
  const Eigen::Index n = xt.cols();
  const auto k = static_cast<Eigen::Index>(model.size());
  Eigen::MatrixXd out(n, k);
  for (Eigen::Index j = 0; j < k; ++j) {
    const auto& g = model.components[static_cast<std::size_t>(j)];
    const auto llt = robust_cholesky(g.covariance, floor);
    Eigen::MatrixXd diff = xt.colwise() - g.mean;
    llt.matrixL().solveInPlace(diff);
    const Eigen::MatrixXd l = llt.matrixL();
    const double log_det = 2.0 * l.diagonal().array().log().sum();
    const double log_w = std::log(g.mixture_weight);
    out.col(j) = (log_w - 0.5 * (static_cast<double>(dim) * kLog2Pi + log_det)) -
                 0.5 * diff.colwise().squaredNorm().transpose().array();
  }
  return out;
}

// Row-wise log-sum-exp; returns total log-likelihood and leaves log
// responsibilities in `log_dens`.
double normalize_responsibilities(Eigen::MatrixXd& log_dens) {
  double total = 0.0;
  for (Eigen::Index i = 0; i < log_dens.rows(); ++i) {
    const double m = log_dens.row(i).maxCoeff();
    const double lse = m + std::log((log_dens.row(i).array() - m).exp().sum());
    log_dens.row(i).array() -= lse;
    total += lse;
  }
  return total;
}

std::vector<Eigen::Index> kmeans_plus_plus(const Eigen::MatrixXd& xt, int k, RandomStream& rng) {
  const Eigen::Index n = xt.cols();
  std::vector<Eigen::Index> centers;
  centers.reserve(static_cast<std::size_t>(k));
  centers.push_back(static_cast<Eigen::Index>(rng.index(static_cast<std::size_t>(n))));
  Eigen::VectorXd d2 = (xt.colwise() - xt.col(centers[0])).colwise().squaredNorm().transpose();
  while (static_cast<int>(centers.size()) < k) {
    const double total = d2.sum();
    Eigen::Index pick = n - 1;
    if (total > 0.0) {
      const double u = rng.uniform() * total;
      double cum = 0.0;
      for (Eigen::Index i = 0; i < n; ++i) {
        cum += d2[i];
        if (u < cum) {
          pick = i;
          break;
        }
      }
    } else {
      pick = static_cast<Eigen::Index>(rng.index(static_cast<std::size_t>(n)));
    }
    centers.push_back(pick);
    d2 = d2.cwiseMin((xt.colwise() - xt.col(pick)).colwise().squaredNorm().transpose());
  }
  return centers;
}

// Lloyd iterations from the given seeds; returns hard labels.
std::vector<int> lloyd(const Eigen::MatrixXd& xt, const std::vector<Eigen::Index>& seeds) {
  const Eigen::Index n = xt.cols();
  const auto k = static_cast<Eigen::Index>(seeds.size());
  Eigen::MatrixXd centers(xt.rows(), k);
  for (Eigen::Index j = 0; j < k; ++j) centers.col(j) = xt.col(seeds[static_cast<std::size_t>(j)]);
  std::vector<int> labels(static_cast<std::size_t>(n), -1);
  for (int it = 0; it < 300; ++it) {
    bool changed = false;
    for (Eigen::Index i = 0; i < n; ++i) {
      Eigen::Index best = 0;
      (centers.colwise() - xt.col(i)).colwise().squaredNorm().minCoeff(&best);
      if (labels[static_cast<std::size_t>(i)] != static_cast<int>(best)) {
        labels[static_cast<std::size_t>(i)] = static_cast<int>(best);
        changed = true;
      }
    }
    if (!changed) break;
    Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(xt.rows(), k);
    Eigen::VectorXd counts = Eigen::VectorXd::Zero(k);
    for (Eigen::Index i = 0; i < n; ++i) {
      sums.col(labels[static_cast<std::size_t>(i)]) += xt.col(i);
      counts[labels[static_cast<std::size_t>(i)]] += 1.0;
    }
    // An emptied cluster keeps its old centre.
    for (Eigen::Index j = 0; j < k; ++j)
      if (counts[j] > 0.0) centers.col(j) = sums.col(j) / counts[j];
  }
  return labels;
}

// One M-step from responsibilities (n x k). Counts get a tiny offset so an
// empty component keeps a finite log weight.
void m_step(GmmSnapshot& model, const Eigen::MatrixXd& xt, const Eigen::MatrixXd& resp,
            const Eigen::MatrixXd& floor_eye) {
  const auto n = static_cast<double>(xt.cols());
  for (Eigen::Index j = 0; j < resp.cols(); ++j) {
    auto& g = model.components[static_cast<std::size_t>(j)];
    const double nk = resp.col(j).sum() + 10.0 * std::numeric_limits<double>::epsilon();
    g.mixture_weight = nk / n;
    g.mean = xt * resp.col(j) / nk;
    const Eigen::MatrixXd centered = xt.colwise() - g.mean;
    g.covariance = (centered * resp.col(j).asDiagonal() * centered.transpose()) / nk + floor_eye;
    g.covariance = 0.5 * (g.covariance + g.covariance.transpose());
  }
  double total = 0.0;
  for (const auto& g : model.components) total += g.mixture_weight;
  for (auto& g : model.components) g.mixture_weight /= total;
}

bool all_identical(const Eigen::MatrixXd& xt) {
  for (Eigen::Index i = 1; i < xt.cols(); ++i)
    if (xt.col(i) != xt.col(0)) return false;
  return true;
}

}  // namespace

EmResult fit_em(const Eigen::MatrixXd& points, int k, RandomStream& rng,
                const EmOptions& options) {
  if (k < 1) throw ContractError("fit_em needs k >= 1");
  const Eigen::Index n = points.rows();
  const Eigen::Index dim = points.cols();
  if (n < k)
    throw ContractError("fit_em: " + std::to_string(n) + " points cannot support k=" +
                        std::to_string(k));
  if (dim < 1) throw ContractError("fit_em: zero-dimensional points");

  const Eigen::MatrixXd xt = points.transpose();
  const Eigen::MatrixXd floor_eye =
      options.covariance_floor * Eigen::MatrixXd::Identity(dim, dim);
  EmResult result;

  if (all_identical(xt)) {
    result.model.degenerate = true;
    result.model.components.push_back({xt.col(0), floor_eye, 1.0});
    result.log_likelihood_trace.push_back(log_likelihood(result.model, points));
    result.converged = true;
    return result;
  }

  // k-means++ seeds, Lloyd to convergence, then one M-step on the hard labels.
  const auto labels = lloyd(xt, kmeans_plus_plus(xt, k, rng));
  Eigen::MatrixXd hard = Eigen::MatrixXd::Zero(n, k);
  for (Eigen::Index i = 0; i < n; ++i) hard(i, labels[static_cast<std::size_t>(i)]) = 1.0;
  result.model.components.assign(static_cast<std::size_t>(k), {});
  m_step(result.model, xt, hard, floor_eye);

  const double tol = options.tolerance_per_point * static_cast<double>(n);
  for (int it = 0;; ++it) {
    Eigen::MatrixXd log_resp = weighted_log_densities(result.model, xt, options.covariance_floor);
    const double ll = normalize_responsibilities(log_resp);
    if (!result.log_likelihood_trace.empty() &&
        ll - result.log_likelihood_trace.back() < tol) {
      result.log_likelihood_trace.push_back(ll);
      result.converged = true;
      break;
    }
    result.log_likelihood_trace.push_back(ll);
    if (it == options.max_iterations) break;

    m_step(result.model, xt, log_resp.array().exp().matrix(), floor_eye);
    result.iterations = it + 1;
  }
  return result;
}

double log_likelihood(const GmmSnapshot& model, const Eigen::MatrixXd& points) {
  if (model.empty()) throw ContractError("log_likelihood of an empty mixture");
  if (points.cols() != model.components.front().dims())
    throw ContractError("log_likelihood: dimension mismatch");
  Eigen::MatrixXd dens = weighted_log_densities(model, points.transpose(), kCovarianceFloor);
  return normalize_responsibilities(dens);
}

std::size_t parameter_count(std::size_t k, std::size_t dim) {
  return k * (dim + dim * (dim + 1) / 2) + (k - 1);
}

double aic(const GmmSnapshot& model, const Eigen::MatrixXd& points) {
  const auto p = parameter_count(model.size(), static_cast<std::size_t>(points.cols()));
  return 2.0 * static_cast<double>(p) - 2.0 * log_likelihood(model, points);
}

ModelSelection select_best_k(const Eigen::MatrixXd& points, int k_max, RandomStream& rng,
                             const EmOptions& options) {
  if (points.rows() < 2) throw ContractError("select_best_k needs at least 2 points");
  if (k_max < 2) throw ConfigError("k_max must be >= 2");
  const std::uint64_t base = rng.next_u64();
  ModelSelection sel;
  const int k_hi = std::min<int>(k_max, static_cast<int>(points.rows()));
  for (int k = 2; k <= k_hi; ++k) {
    RandomStream child = RandomStream(base).derive(static_cast<std::uint64_t>(k));
    EmResult fit = fit_em(points, k, child, options);
    const double score = aic(fit.model, points);
    if (sel.candidates.empty() || score < sel.aic[sel.best]) sel.best = sel.candidates.size();
    sel.aic.push_back(score);
    sel.candidates.push_back(std::move(fit));
  }
  return sel;
}

std::size_t sample_component_by_lp(std::span<const WeightedGaussian> mixture, RandomStream& rng) {
  if (mixture.empty()) throw ContractError("cannot sample from an empty mixture");
  double total = 0.0;
  for (const auto& g : mixture) total += std::max(g.lp(), 0.0);
  if (!(total > 0.0)) return rng.index(mixture.size());
  const double u = rng.uniform() * total;
  double cum = 0.0;
  for (std::size_t i = 0; i < mixture.size(); ++i) {
    cum += std::max(mixture[i].lp(), 0.0);
    if (u < cum) return i;
  }
  // u landed on the rounding sliver past the last positive arm.
  for (std::size_t i = mixture.size(); i-- > 0;)
    if (mixture[i].lp() > 0.0) return i;
  return mixture.size() - 1;
}

TaskParams sample_task_from(const WeightedGaussian& g, const TaskSpace& space, RandomStream& rng) {
  const auto d = static_cast<Eigen::Index>(space.dims());
  if (g.dims() < d) throw ContractError("Gaussian has fewer dims than the task space");
  const Eigen::MatrixXd cov = g.covariance.topLeftCorner(d, d);
  const auto llt = robust_cholesky(cov, kCovarianceFloor);
  Eigen::VectorXd z(d);
  for (Eigen::Index i = 0; i < d; ++i) z[i] = rng.normal();
  const Eigen::VectorXd unit = g.mean.head(d) + llt.matrixL() * z;
  return space.clip(space.denormalize(TaskParams{{unit.data(), unit.data() + d}}));
}

}  // namespace acl
