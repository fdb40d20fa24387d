#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "gfss/detectors.hpp"
#include "gfss/spectrum.hpp"

namespace gfss {

// Threshold curve of the adaptive test,
//   tau(rho) = 2 ( sqrt(s2(rho) log((p-1)/alpha)) + log((p-1)/alpha) ),
// the scan-level null bound applied at level alpha/(p-1) so that the union
// over the p-1 knot candidates stays a level-alpha test.
double tau(const Spectrum& spec, double rho, double alpha);

// Piecewise-linear representation of rho -> gfss_stat(spec, y, rho). The
// knots are the positive eigenvalues; between consecutive knots the statistic
// is slope * rho + intercept, with slope the attenuated tail sum and
// intercept the saturated head sum.
class TstatCurve {
 public:
  TstatCurve(const Spectrum& spec, const Signal& y);

  double operator()(double rho) const;
  // lambda_2..lambda_p
  std::vector<double> knots() const;
  // slope of the final segment is 0; value there is energy - (p-1)
  double slope(double rho) const;

 private:
  Eigen::VectorXd lambda_;
  std::vector<double> tail_slope_;      // per 0-based tail start k: sum_{k'>=k} (c2-1)/lambda
  std::vector<double> head_intercept_;  // per 0-based head end k: sum_{1<=k'<=k} (c2-1)
};

// Per-segment data for knot j (eigenvalue indices are 1-based, j in 2..p).
// On [lambda_j, lambda_{j+1}] the threshold is
//   tau(rho) = sqrt(quad_coeff rho^2 + const_coeff) + log_offset
// and the statistic is t(rho) = slope rho + intercept; rho is the exact
// minimizer of tau - t restricted to the segment.
struct KnotCandidate {
  int knot = 0;
  double quad_coeff = 0.0;
  double const_coeff = 0.0;
  double log_offset = 0.0;
  double slope = 0.0;
  double intercept = 0.0;
  double rho = 0.0;
};

std::vector<KnotCandidate> candidate_rhos(const Spectrum& spec, const Signal& y, double alpha);

struct KnotRow {
  int knot = 0;
  double rho = 0.0;
  double tstat = 0.0;
  double threshold = 0.0;
};

struct AdaptiveResult {
  bool reject = false;
  // max over knots of tstat - threshold; positive exactly when rejecting
  double margin = 0.0;
  // smallest rejecting knot, present iff reject
  std::optional<KnotRow> witness;
  // every (j, rho_j, t, tau) row, for diagnostics and export
  std::vector<KnotRow> rows;
};

// Rejects H0 iff the statistic curve crosses the threshold curve at some
// rho > 0, decided exactly by checking the p-1 knot candidates.
AdaptiveResult adaptive_test(const Spectrum& spec, const Signal& y, double alpha);

// Reusable evaluator: precomputes everything that depends only on the
// spectrum and alpha, so Monte Carlo loops pay O(p) per signal after the
// Fourier transform. The spectrum must outlive the scanner.
class AdaptiveScanner {
 public:
  AdaptiveScanner(const Spectrum& spec, double alpha);

  AdaptiveResult test(const Signal& y) const;
  AdaptiveResult test_from_coeffs(const Eigen::VectorXd& fourier_coeffs) const;

  // Rejection margin only; the simulation hot path.
  double margin(const Signal& y) const;
  double margin_from_coeffs(const Eigen::VectorXd& fourier_coeffs) const;

  double alpha() const { return alpha_; }

 private:
  struct Segment {
    double lo = 0.0;
    double hi = 0.0;
    double quad_coeff = 0.0;  // A
    double const_coeff = 0.0; // B
  };

  template <bool kCollectRows>
  AdaptiveResult scan(const Eigen::VectorXd& coeffs) const;

  const Spectrum* spec_;
  double alpha_;
  double log_term_;                 // log((p-1)/alpha)
  Eigen::VectorXd lambda_;
  std::vector<double> inv_lambda_;  // 0 at index 0
  std::vector<double> tail_inv_sq_; // suffix sums of 1/lambda^2, size p+1
  std::vector<Segment> segments_;   // one per knot j = 2..p
};

}  // namespace gfss
