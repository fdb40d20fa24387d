#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>

#include "gfss/graph.hpp"
#include "gfss/spectrum.hpp"

namespace gfss {

// One real measurement per vertex.
using Signal = Eigen::VectorXd;

struct DetectionResult {
  std::string method;
  double statistic = 0.0;
  std::optional<double> threshold;
  std::optional<double> p_value;
  std::optional<bool> reject;
  std::optional<double> rho;
  std::optional<double> zscore;
};

// Graph Fourier transform: coefficient i is u_i^T y. Energy preserving.
Eigen::VectorXd graph_fourier(const Spectrum& spec, const Signal& y);

// Graph Fourier scan statistic
//   t = sum_{i>=2} min{1, rho/lambda_i} ((u_i^T y)^2 - 1),
// the energy of the low-pass filtered signal centered at its null mean. The
// constant eigenvector is excluded so the statistic is invariant to adding a
// constant to y.
double gfss_stat(const Spectrum& spec, const Signal& y, double rho);

// Same value computed from the top-j eigenspace (j = max{i : lambda_i < rho})
// plus a pseudo-inverse Laplacian solve on the residual:
//   y^T P_j y + rho y^T (I-P_j) pinv(L) (I-P_j) y - s1(rho).
// Agrees with gfss_stat to within solver accuracy; exists as the scalable
// path and as a cross-check of the reference path.
double gfss_via_projection(const Graph& g, const Spectrum& spec, const Signal& y, double rho);

// Centered energy ||y - mean(y) 1||^2.
double energy_stat(const Signal& y);

// max_i |y_i - mean(y)|
double max_stat(const Signal& y);

// 1^T y
double aggregate_stat(const Signal& y);

// Per-cluster likelihood ratio 2 log Lambda_C
//   = (1/sigma^2) (p / (|C||Cbar|)) (sum_{v in C} (y_v - mean(y)))^2.
double lr_stat(const Signal& y, const VertexSet& c, double sigma);

struct GlrResult {
  double value;      // max over feasible C of 2 sigma^2 log Lambda_C
  VertexSet argmax;  // lexicographically smallest maximizer
};

// Exhaustive generalized likelihood ratio scan over every proper cluster
// with cut_sparsity(C) <= rho. Enumerates the 2^(p-1) - 1 bipartitions, so it
// is gated on vertex_count <= exhaustive_limit; it exists as a correctness
// oracle, not a production detector. The scaled maximum 2 sigma^2 log Lambda
// does not depend on sigma. Throws EmptyClassError when no cluster is
// feasible at the given rho.
GlrResult glr_scan(const Graph& g, const Signal& y, double rho, double sigma = 1.0,
                   int exhaustive_limit = 18);

// Spectral scan statistic: the squared optimum of
//   sup b^T z  s.t.  ||z|| <= 1,  z^T diag(lambda_2..lambda_p) z <= rho,
// where b holds the non-constant Fourier coefficients of y. Solved in the
// eigenbasis through the KKT system: the maximizer has the form
// (kappa I + eta Lambda/rho)^{-1} b, and the multiplier ratio is located by
// bisection until both constraint residuals are below 1e-10. Throws
// ConvergenceError with diagnostics if the bisection cannot meet tolerance.
double sss_stat(const Spectrum& spec, const Signal& y, double rho);

}  // namespace gfss
