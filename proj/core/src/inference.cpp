#include "gfss/inference.hpp"

#include <algorithm>
#include <atomic>
#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/normal.hpp>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "gfss/parallel.hpp"

namespace gfss {

ChiSqWeights::ChiSqWeights(Eigen::VectorXd weights) : weights_(std::move(weights)) {
  if (weights_.size() == 0) throw std::invalid_argument("ChiSqWeights: empty weight vector");
  if ((weights_.array() < 0.0).any())
    throw std::invalid_argument("ChiSqWeights: weights must be nonnegative");
  norm2_ = weights_.norm();
  norm_inf_ = weights_.cwiseAbs().maxCoeff();
}

ChiSqWeights ChiSqWeights::gfss_null(const Spectrum& spec, double rho) {
  if (!(rho > 0.0)) throw std::invalid_argument("ChiSqWeights: rho must be positive");
  if (!spec.connected()) throw std::invalid_argument("ChiSqWeights: spectrum must be connected");
  Eigen::VectorXd a(spec.size() - 1);
  for (int i = 1; i < spec.size(); ++i) a[i - 1] = std::min(1.0, rho / spec.eigenvalue(i));
  return ChiSqWeights(std::move(a));
}

double chisq_upper_tail(const ChiSqWeights& w, double x) {
  if (x < 0.0) throw std::invalid_argument("chisq_upper_tail: x must be nonnegative");
  return 2.0 * w.norm2() * std::sqrt(x) + 2.0 * w.norm_inf() * x;
}

double chisq_lower_tail(const ChiSqWeights& w, double x) {
  if (x < 0.0) throw std::invalid_argument("chisq_lower_tail: x must be nonnegative");
  return -2.0 * w.norm2() * std::sqrt(x);
}

double null_threshold(const Spectrum& spec, double rho, double alpha) {
  if (!(alpha > 0.0) || alpha > 1.0)
    throw std::invalid_argument("null_threshold: alpha must lie in (0, 1]");
  const double log_term = std::log(1.0 / alpha);
  const double s2 = spectral_sum_s2(spec, rho);
  return 2.0 * (std::sqrt(s2 * log_term) + log_term);
}

double alt_lower_bound(const Spectrum& spec, double rho, double mu, double sigma, double gamma) {
  if (!(sigma > 0.0)) throw std::invalid_argument("alt_lower_bound: sigma must be positive");
  if (!(gamma > 0.0) || gamma > 2.0)
    throw std::invalid_argument("alt_lower_bound: gamma must lie in (0, 2]");
  const double log_term = std::log(2.0 / gamma);
  const double s2 = spectral_sum_s2(spec, rho);
  const double snr = mu / sigma;
  return snr * snr / 2.0 - 2.0 * snr * std::sqrt(log_term) - 2.0 * std::sqrt(s2 * log_term);
}

double zscore(const Spectrum& spec, const Signal& y, double rho) {
  const double s2 = spectral_sum_s2(spec, rho);
  return gfss_stat(spec, y, rho) / std::sqrt(2.0 * s2);
}

double permutation_pvalue(const Spectrum& spec, const Signal& y, double rho, int n_perm,
                          std::uint64_t seed, int threads) {
  if (n_perm < 1) throw std::invalid_argument("permutation_pvalue: n_perm must be >= 1");
  const double observed = gfss_stat(spec, y, rho);
  const int p = spec.size();

  std::atomic<long> exceed{0};
  parallel_for(n_perm, threads, [&](int r) {
    std::mt19937_64 rng = substream(seed, static_cast<std::uint64_t>(r));
    std::vector<int> perm(p);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    Signal permuted(p);
    for (int v = 0; v < p; ++v) permuted[v] = y[perm[v]];
    // ties count toward exceedance
    if (gfss_stat(spec, permuted, rho) >= observed) exceed.fetch_add(1, std::memory_order_relaxed);
  });
  return (1.0 + static_cast<double>(exceed.load())) / (1.0 + n_perm);
}

Eigen::VectorXd binarize_standardize(const Eigen::VectorXd& raw, double cutoff) {
  if (raw.size() == 0) throw std::invalid_argument("binarize_standardize: empty input");
  Eigen::VectorXd b = (raw.array() > cutoff).cast<double>();
  const double phat = b.mean();
  if (phat <= 0.0 || phat >= 1.0)
    throw std::domain_error("binarize_standardize: all indicators equal; nothing to standardize");
  const double scale = std::sqrt(phat * (1.0 - phat));
  return (b.array() - phat) / scale;
}

double chi_squared_quantile(double dof, double prob) {
  boost::math::chi_squared_distribution<double> dist(dof);
  return boost::math::quantile(dist, prob);
}

double normal_quantile(double prob) {
  boost::math::normal_distribution<double> dist(0.0, 1.0);
  return boost::math::quantile(dist, prob);
}

}  // namespace gfss
