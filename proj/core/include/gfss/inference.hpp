#pragma once

#include <Eigen/Dense>
#include <cstdint>

#include "gfss/detectors.hpp"
#include "gfss/spectrum.hpp"

namespace gfss {

// Weights of a centered weighted chi-square sum Z = sum_i a_i (X_i - 1) with
// X_i independent chi-square(1). Caches the norms the tail bounds need.
class ChiSqWeights {
 public:
  explicit ChiSqWeights(Eigen::VectorXd weights);

  // Null-distribution weights of the graph Fourier scan statistic at a given
  // rho: a_i = min{1, rho/lambda_i} for i >= 2, so ||a||_2^2 = s2(rho).
  static ChiSqWeights gfss_null(const Spectrum& spec, double rho);

  const Eigen::VectorXd& weights() const { return weights_; }
  double norm2() const { return norm2_; }
  double norm_inf() const { return norm_inf_; }

 private:
  Eigen::VectorXd weights_;
  double norm2_ = 0.0;
  double norm_inf_ = 0.0;
};

// Deviation levels of the concentration bounds
//   P{ Z >=  2||a||_2 sqrt(x) + 2||a||_inf x } <= exp(-x)
//   P{ Z <= -2||a||_2 sqrt(x)               } <= exp(-x).
double chisq_upper_tail(const ChiSqWeights& w, double x);
double chisq_lower_tail(const ChiSqWeights& w, double x);

// Level-alpha rejection threshold for the scan statistic under the Gaussian
// null: 2(sqrt(s2(rho) log(1/alpha)) + log(1/alpha)). alpha in (0, 1].
double null_threshold(const Spectrum& spec, double rho, double alpha);

// High-probability lower bound on the statistic under the structured
// alternatives: mu^2/(2 sigma^2) - (2 mu/sigma) sqrt(log(2/gamma))
// - 2 sqrt(s2(rho) log(2/gamma)). A power diagnostic, not a decision rule.
double alt_lower_bound(const Spectrum& spec, double rho, double mu, double sigma, double gamma);

// Standardized scan statistic t / sqrt(2 s2(rho)); exact null mean 0 and
// variance 1 under i.i.d. standard Gaussian noise. Not scale invariant: the
// measurements must be standardized to unit noise first.
double zscore(const Spectrum& spec, const Signal& y, double rho);

// Permutation p-value of the scan statistic: coordinates of y are permuted
// while the graph is kept fixed, and the add-one estimate
// (1 + #{permuted >= observed}) / (1 + n_perm) is returned. Deterministic
// given the seed and independent of the thread count.
double permutation_pvalue(const Spectrum& spec, const Signal& y, double rho, int n_perm,
                          std::uint64_t seed, int threads = 0);

// Threshold raw measurements at the cutoff and standardize the resulting
// indicator by its binomial moments: (b - phat) / sqrt(phat (1 - phat)).
// Rejects degenerate inputs where every indicator is equal.
Eigen::VectorXd binarize_standardize(const Eigen::VectorXd& raw, double cutoff);

// Distribution quantiles backing the command-line decision rules.
double chi_squared_quantile(double dof, double prob);
double normal_quantile(double prob);

}  // namespace gfss
