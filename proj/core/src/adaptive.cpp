#include "gfss/adaptive.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace gfss {

namespace {

void check_alpha(double alpha, const char* where) {
  if (!(alpha > 0.0) || !(alpha < 1.0))
    throw std::invalid_argument(std::string(where) + ": alpha must lie in (0,1)");
}

void check_connected(const Spectrum& spec, const char* where) {
  if (spec.size() < 2 || !spec.connected())
    throw std::invalid_argument(std::string(where) + ": spectrum must come from a connected graph");
}

// last 0-based index with lambda[k] <= rho (>= 0 since lambda[0] = 0)
int saturated_count(const Eigen::VectorXd& lambda, double rho) {
  int lo = 0, hi = static_cast<int>(lambda.size()) - 1;
  while (lo < hi) {
    const int mid = (lo + hi + 1) / 2;
    if (lambda[mid] <= rho) {
      lo = mid;
    } else {
      hi = mid - 1;
    }
  }
  return lo;
}

}  // namespace

double tau(const Spectrum& spec, double rho, double alpha) {
  check_alpha(alpha, "tau");
  check_connected(spec, "tau");
  const double log_term = std::log((spec.size() - 1) / alpha);
  const double s2 = spectral_sum_s2(spec, rho);
  return 2.0 * (std::sqrt(s2 * log_term) + log_term);
}

TstatCurve::TstatCurve(const Spectrum& spec, const Signal& y) {
  check_connected(spec, "TstatCurve");
  if (y.size() != spec.size())
    throw std::invalid_argument("TstatCurve: signal length does not match graph size");
  const int p = spec.size();
  lambda_ = spec.eigenvalues();
  const Eigen::VectorXd coeffs = graph_fourier(spec, y);

  tail_slope_.assign(p + 1, 0.0);
  for (int k = p - 1; k >= 1; --k) {
    const double g = coeffs[k] * coeffs[k] - 1.0;
    tail_slope_[k] = tail_slope_[k + 1] + g / lambda_[k];
  }
  head_intercept_.assign(p, 0.0);
  for (int k = 1; k < p; ++k) {
    const double g = coeffs[k] * coeffs[k] - 1.0;
    head_intercept_[k] = head_intercept_[k - 1] + g;
  }
}

double TstatCurve::operator()(double rho) const {
  if (!(rho > 0.0)) throw std::invalid_argument("TstatCurve: rho must be positive");
  const int k = saturated_count(lambda_, rho);
  return rho * tail_slope_[k + 1] + head_intercept_[k];
}

double TstatCurve::slope(double rho) const {
  if (!(rho > 0.0)) throw std::invalid_argument("TstatCurve: rho must be positive");
  return tail_slope_[saturated_count(lambda_, rho) + 1];
}

std::vector<double> TstatCurve::knots() const {
  return std::vector<double>(lambda_.data() + 1, lambda_.data() + lambda_.size());
}

AdaptiveScanner::AdaptiveScanner(const Spectrum& spec, double alpha)
    : spec_(&spec), alpha_(alpha) {
  check_alpha(alpha, "AdaptiveScanner");
  check_connected(spec, "AdaptiveScanner");
  const int p = spec.size();
  log_term_ = std::log((p - 1) / alpha);
  lambda_ = spec.eigenvalues();

  inv_lambda_.assign(p, 0.0);
  for (int k = 1; k < p; ++k) inv_lambda_[k] = 1.0 / lambda_[k];

  tail_inv_sq_.assign(p + 1, 0.0);
  for (int k = p - 1; k >= 1; --k)
    tail_inv_sq_[k] = tail_inv_sq_[k + 1] + inv_lambda_[k] * inv_lambda_[k];

  segments_.resize(p - 1);
  for (int j = 2; j <= p; ++j) {
    Segment& s = segments_[j - 2];
    s.lo = lambda_[j - 1];
    s.hi = (j < p) ? lambda_[j] : lambda_[p - 1];
    s.quad_coeff = 4.0 * log_term_ * tail_inv_sq_[j];
    s.const_coeff = 4.0 * log_term_ * (j - 1);
  }
}

template <bool kCollectRows>
AdaptiveResult AdaptiveScanner::scan(const Eigen::VectorXd& coeffs) const {
  const int p = static_cast<int>(lambda_.size());
  if (coeffs.size() != p)
    throw std::invalid_argument("AdaptiveScanner: coefficient length does not match graph size");

  // suffix sums of (c^2-1)/lambda and prefix sums of (c^2-1)
  std::vector<double> tail_slope(p + 1, 0.0);
  for (int k = p - 1; k >= 1; --k) {
    const double g = coeffs[k] * coeffs[k] - 1.0;
    tail_slope[k] = tail_slope[k + 1] + g * inv_lambda_[k];
  }
  std::vector<double> head(p, 0.0);
  for (int k = 1; k < p; ++k) head[k] = head[k - 1] + coeffs[k] * coeffs[k] - 1.0;

  auto eval_tstat = [&](double rho) {
    const int k = saturated_count(lambda_, rho);
    return rho * tail_slope[k + 1] + head[k];
  };
  auto eval_tau = [&](double rho) {
    const int k = saturated_count(lambda_, rho);
    const double s2 = k + rho * rho * tail_inv_sq_[k + 1];
    return 2.0 * (std::sqrt(s2 * log_term_) + log_term_);
  };

  AdaptiveResult result;
  result.margin = -std::numeric_limits<double>::infinity();
  if constexpr (kCollectRows) result.rows.reserve(p - 1);

  for (int j = 2; j <= p; ++j) {
    const Segment& s = segments_[j - 2];
    const double slope = tail_slope[j];  // E for this segment

    // minimizer of sqrt(A rho^2 + B) + D - (E rho + F) over [lo, hi]:
    // nonpositive slope means the difference is nondecreasing (left end);
    // slope^2 >= A means it decreases for all rho (right end); otherwise the
    // interior stationary point, clamped.
    double rho;
    if (slope <= 0.0) {
      rho = s.lo;
    } else if (s.quad_coeff - slope * slope <= 1e-14) {
      rho = s.hi;
    } else {
      const double interior = std::sqrt(slope * slope * s.const_coeff /
                                        (s.quad_coeff * (s.quad_coeff - slope * slope)));
      rho = std::clamp(interior, s.lo, s.hi);
    }

    const double t = eval_tstat(rho);
    const double thr = eval_tau(rho);
    const double diff = t - thr;
    if (diff > result.margin) result.margin = diff;
    if (diff > 0.0 && !result.witness) result.witness = KnotRow{j, rho, t, thr};
    if constexpr (kCollectRows) result.rows.push_back(KnotRow{j, rho, t, thr});
  }
  result.reject = result.margin > 0.0;
  return result;
}

AdaptiveResult AdaptiveScanner::test_from_coeffs(const Eigen::VectorXd& coeffs) const {
  return scan<true>(coeffs);
}

AdaptiveResult AdaptiveScanner::test(const Signal& y) const {
  return scan<true>(graph_fourier(*spec_, y));
}

double AdaptiveScanner::margin_from_coeffs(const Eigen::VectorXd& coeffs) const {
  return scan<false>(coeffs).margin;
}

double AdaptiveScanner::margin(const Signal& y) const {
  return scan<false>(graph_fourier(*spec_, y)).margin;
}

std::vector<KnotCandidate> candidate_rhos(const Spectrum& spec, const Signal& y, double alpha) {
  check_alpha(alpha, "candidate_rhos");
  check_connected(spec, "candidate_rhos");
  const int p = spec.size();
  const Eigen::VectorXd coeffs = graph_fourier(spec, y);
  const double log_term = std::log((p - 1) / alpha);
  const Eigen::VectorXd& lambda = spec.eigenvalues();

  std::vector<double> tail_slope(p + 1, 0.0), tail_inv_sq(p + 1, 0.0);
  for (int k = p - 1; k >= 1; --k) {
    const double g = coeffs[k] * coeffs[k] - 1.0;
    tail_slope[k] = tail_slope[k + 1] + g / lambda[k];
    tail_inv_sq[k] = tail_inv_sq[k + 1] + 1.0 / (lambda[k] * lambda[k]);
  }
  std::vector<double> head(p, 0.0);
  for (int k = 1; k < p; ++k) head[k] = head[k - 1] + coeffs[k] * coeffs[k] - 1.0;

  std::vector<KnotCandidate> out;
  out.reserve(p - 1);
  for (int j = 2; j <= p; ++j) {
    KnotCandidate c;
    c.knot = j;
    c.quad_coeff = 4.0 * log_term * tail_inv_sq[j];
    c.const_coeff = 4.0 * log_term * (j - 1);
    c.log_offset = 2.0 * log_term;
    c.slope = tail_slope[j];
    c.intercept = head[j - 1];
    const double lo = lambda[j - 1];
    const double hi = (j < p) ? lambda[j] : lambda[p - 1];
    if (c.slope <= 0.0) {
      c.rho = lo;
    } else if (c.quad_coeff - c.slope * c.slope <= 1e-14) {
      c.rho = hi;
    } else {
      const double interior =
          std::sqrt(c.slope * c.slope * c.const_coeff /
                    (c.quad_coeff * (c.quad_coeff - c.slope * c.slope)));
      c.rho = std::clamp(interior, lo, hi);
    }
    out.push_back(c);
  }
  return out;
}

AdaptiveResult adaptive_test(const Spectrum& spec, const Signal& y, double alpha) {
  AdaptiveScanner scanner(spec, alpha);
  return scanner.test(y);
}

}  // namespace gfss
