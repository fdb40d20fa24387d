#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "gfss/adaptive.hpp"
#include "gfss/detectors.hpp"
#include "gfss/graph.hpp"
#include "gfss/spectrum.hpp"

namespace gfss {

// Alternative-signal generator: a piecewise-constant bump on a cluster, or
// its subsampled variant where each cluster vertex is kept with probability q
// and the level is boosted to keep the mean-gap membership quantity at mu.
struct SignalModel {
  enum class Kind { PiecewiseConstant, Subsampled };
  Kind kind = Kind::PiecewiseConstant;
  VertexSet cluster;
  double mu = 1.0;
  double offset = 0.0;  // background level, piecewise-constant only
  double q = 1.0;       // keep probability, subsampled only
};

// x = offset 1 + delta 1_C with delta = mu sqrt(p / (|C| |Cbar|)), so that
// ||x - mean(x) 1|| = mu exactly.
Signal make_pc_signal(const Graph& g, const VertexSet& c, double mu, double offset);

// Keeps each member with probability q, redrawing until non-empty.
VertexSet subsample_cluster(const VertexSet& c, double q, std::mt19937_64& rng);

// delta' 1_{C'} with delta' = mu sqrt(p/(|C||Cbar|)) |C| / |C'|; the boost is
// calibrated so the membership quantity below equals mu for any realized C'.
Signal make_subsampled_signal(const Graph& g, const VertexSet& c, double mu, double q,
                              std::mt19937_64& rng);

// |mean_C(x) - mean_Cbar(x)| sqrt(|C||Cbar|/p) >= mu - 1e-10
bool membership_xs(const Graph& g, const Signal& x, double mu, const VertexSet& c);

// Draws one realization of the model (resamples the subsampled cluster).
Signal realize_signal(const Graph& g, const SignalModel& model, std::mt19937_64& rng);

// ---------------------------------------------------------------------------
// Detectors as scalar statistics evaluated on a replicate. The Fourier
// coefficients of y are computed once per replicate and shared.
struct DetectorInput {
  const Signal& y;
  const Eigen::VectorXd& coeffs;  // graph_fourier(spec, y)
};

struct Detector {
  std::string label;
  std::function<double(const DetectorInput&)> stat;
};

// The spectrum must outlive detectors built from it.
Detector gfss_detector(const Spectrum& spec, double rho);
Detector adaptive_detector(const Spectrum& spec, double alpha);  // rejection margin
Detector energy_detector();
Detector max_detector();
Detector aggregate_detector();

// ---------------------------------------------------------------------------
// Monte Carlo harness. Replicate r derives its RNG substream from (seed, r),
// so output is identical for any thread count; all detectors see the same
// draws (common random numbers).
struct DetectorStats {
  std::string detector;
  std::vector<double> null_stats;
  std::vector<double> alt_stats;
};

std::vector<DetectorStats> simulate_statistics(const Graph& g, const Spectrum& spec,
                                               const std::vector<Detector>& detectors,
                                               const SignalModel& model, double sigma, int n_reps,
                                               std::uint64_t seed, int threads = 0);

// Null-only variant: statistics on pure-noise draws.
std::vector<std::vector<double>> simulate_null_statistics(const Spectrum& spec,
                                                          const std::vector<Detector>& detectors,
                                                          double sigma, int n_reps,
                                                          std::uint64_t seed, int threads = 0);

struct RocPoint {
  double fa_rate = 0.0;
  double det_rate = 0.0;
};

struct RocCurve {
  std::string detector;
  int n_reps = 0;
  std::vector<RocPoint> points;  // staircase, sorted by fa_rate
  double auc = 0.0;              // P(alt > null) + tie correction
};

RocCurve make_roc(const DetectorStats& stats);

std::vector<RocCurve> simulate_roc(const Graph& g, const Spectrum& spec,
                                   const std::vector<Detector>& detectors,
                                   const SignalModel& model, double sigma, int n_reps,
                                   std::uint64_t seed, int threads = 0);

// Detection rate at the largest threshold whose empirical false-alarm rate
// stays at or below fa_target.
double detection_at_false_alarm(const std::vector<double>& null_stats,
                                const std::vector<double>& alt_stats, double fa_target);

// Mann-Whitney AUC with ties counted half.
double auc_from_stats(const std::vector<double>& null_stats,
                      const std::vector<double>& alt_stats);

// ---------------------------------------------------------------------------
// Canonical clusters for the three topologies. Placement is the
// lexicographically first valid cluster; pass an RNG for random placement.
VertexSet bbt_subtree_cluster(int depth, double target_size, std::mt19937_64* rng = nullptr);
VertexSet torus_square_cluster(int side, int k, std::mt19937_64* rng = nullptr);
VertexSet kron_prefix_cluster(int base_count, int levels, int scale,
                              std::mt19937_64* rng = nullptr);

// Unweighted BFS diameter (used in the Kronecker rate).
int graph_diameter(const Graph& g);

// ---------------------------------------------------------------------------
// Scaling sweep: for each size the SNR follows the family's critical rate
//   bbt:   p^((1-a)/4) (log p)^(1/2)        a = cluster_exponent
//   torus: p^(3/20 + b/10) (log p)^(1/4)    b = cluster_exponent
//   kron:  p^(k/(2 levels)) (diam(base) log p)^(1/4)
// scaled by snr_constant, and the detection rate at fa_target is recorded.
struct SweepConfig {
  std::string family;    // "bbt" | "torus" | "kron"
  std::vector<int> sizes;  // depth / side / levels
  double cluster_exponent = 1.0;
  double cluster_fraction = 0.5;
  int kron_scale = 1;
  std::optional<Graph> kron_base;
  double snr_constant = 1.0;
  // replaces the exponent of p in the rate when set
  std::optional<double> rate_exponent_override;
  std::string detector = "gfss";
  double alpha = 0.05;  // adaptive detector only
  double sigma = 1.0;
  int n_reps = 2000;
  double fa_target = 0.05;
  std::uint64_t seed = 1;
};

struct SweepRow {
  int size_param = 0;
  int p = 0;
  double snr = 0.0;
  double det_rate = 0.0;
};

std::vector<SweepRow> snr_sweep(const SweepConfig& config, int threads = 0);

}  // namespace gfss
