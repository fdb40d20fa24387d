#include "gfss/sim.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <queue>
#include <stdexcept>

#include "gfss/parallel.hpp"

namespace gfss {

namespace {

void check_proper(const Graph& g, const VertexSet& c, const char* where) {
  if (c.size() <= 0 || c.size() >= g.vertex_count())
    throw std::invalid_argument(std::string(where) + ": cluster must be a proper non-empty subset");
  if (c.members().back() >= g.vertex_count())
    throw std::invalid_argument(std::string(where) + ": cluster index out of range");
}

double pc_delta(int p, int cluster_size, double mu) {
  return mu * std::sqrt(static_cast<double>(p) /
                        (static_cast<double>(cluster_size) * (p - cluster_size)));
}

}  // namespace

Signal make_pc_signal(const Graph& g, const VertexSet& c, double mu, double offset) {
  check_proper(g, c, "make_pc_signal");
  if (!(mu > 0.0)) throw std::invalid_argument("make_pc_signal: mu must be positive");
  const int p = g.vertex_count();
  Signal x = Signal::Constant(p, offset);
  const double delta = pc_delta(p, c.size(), mu);
  for (int v : c.members()) x[v] += delta;
  return x;
}

VertexSet subsample_cluster(const VertexSet& c, double q, std::mt19937_64& rng) {
  if (!(q > 0.0) || q > 1.0) throw std::invalid_argument("subsample_cluster: q must lie in (0,1]");
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<int> kept;
  do {
    kept.clear();
    for (int v : c.members()) {
      if (unif(rng) < q) kept.push_back(v);
    }
  } while (kept.empty());
  return VertexSet(std::move(kept));
}

Signal make_subsampled_signal(const Graph& g, const VertexSet& c, double mu, double q,
                              std::mt19937_64& rng) {
  check_proper(g, c, "make_subsampled_signal");
  if (!(mu > 0.0)) throw std::invalid_argument("make_subsampled_signal: mu must be positive");
  const int p = g.vertex_count();
  const VertexSet kept = subsample_cluster(c, q, rng);
  const double delta = pc_delta(p, c.size(), mu);
  const double boosted = delta * static_cast<double>(c.size()) / kept.size();
  Signal x = Signal::Zero(p);
  for (int v : kept.members()) x[v] = boosted;
  return x;
}

bool membership_xs(const Graph& g, const Signal& x, double mu, const VertexSet& c) {
  check_proper(g, c, "membership_xs");
  const int p = g.vertex_count();
  if (x.size() != p) throw std::invalid_argument("membership_xs: signal length mismatch");
  double in_sum = 0.0;
  for (int v : c.members()) in_sum += x[v];
  const double out_sum = x.sum() - in_sum;
  const double size = c.size();
  const double gap = std::abs(in_sum / size - out_sum / (p - size));
  return gap * std::sqrt(size * (p - size) / p) >= mu - 1e-10;
}

Signal realize_signal(const Graph& g, const SignalModel& model, std::mt19937_64& rng) {
  switch (model.kind) {
    case SignalModel::Kind::PiecewiseConstant:
      return make_pc_signal(g, model.cluster, model.mu, model.offset);
    case SignalModel::Kind::Subsampled:
      return make_subsampled_signal(g, model.cluster, model.mu, model.q, rng);
  }
  throw std::invalid_argument("realize_signal: unknown model kind");
}

Detector gfss_detector(const Spectrum& spec, double rho) {
  if (!(rho > 0.0)) throw std::invalid_argument("gfss_detector: rho must be positive");
  const Spectrum* s = &spec;
  return Detector{"gfss", [s, rho](const DetectorInput& in) {
                    double t = 0.0;
                    for (int i = 1; i < s->size(); ++i) {
                      const double w = std::min(1.0, rho / s->eigenvalue(i));
                      t += w * (in.coeffs[i] * in.coeffs[i] - 1.0);
                    }
                    return t;
                  }};
}

Detector adaptive_detector(const Spectrum& spec, double alpha) {
  auto scanner = std::make_shared<AdaptiveScanner>(spec, alpha);
  return Detector{"adaptive", [scanner](const DetectorInput& in) {
                    return scanner->margin_from_coeffs(in.coeffs);
                  }};
}

Detector energy_detector() {
  return Detector{"energy", [](const DetectorInput& in) {
                    // Parseval: centered energy is the non-constant coefficient mass
                    return in.coeffs.tail(in.coeffs.size() - 1).squaredNorm();
                  }};
}

Detector max_detector() {
  return Detector{"max", [](const DetectorInput& in) { return max_stat(in.y); }};
}

Detector aggregate_detector() {
  return Detector{"aggregate", [](const DetectorInput& in) { return aggregate_stat(in.y); }};
}

std::vector<DetectorStats> simulate_statistics(const Graph& g, const Spectrum& spec,
                                               const std::vector<Detector>& detectors,
                                               const SignalModel& model, double sigma, int n_reps,
                                               std::uint64_t seed, int threads) {
  if (n_reps < 10) throw std::invalid_argument("simulate_statistics: n_reps must be >= 10");
  if (!(sigma > 0.0)) throw std::invalid_argument("simulate_statistics: sigma must be positive");
  if (detectors.empty()) throw std::invalid_argument("simulate_statistics: no detectors");
  const int p = g.vertex_count();
  if (spec.size() != p)
    throw std::invalid_argument("simulate_statistics: graph and spectrum sizes differ");

  const int d = static_cast<int>(detectors.size());
  std::vector<DetectorStats> out(d);
  for (int i = 0; i < d; ++i) {
    out[i].detector = detectors[i].label;
    out[i].null_stats.resize(n_reps);
    out[i].alt_stats.resize(n_reps);
  }

  parallel_for(n_reps, threads, [&](int r) {
    std::mt19937_64 rng = substream(seed, static_cast<std::uint64_t>(r));
    std::normal_distribution<double> gauss(0.0, sigma);
    Signal y0(p), y1(p);
    for (int v = 0; v < p; ++v) y0[v] = gauss(rng);
    for (int v = 0; v < p; ++v) y1[v] = gauss(rng);
    y1 += realize_signal(g, model, rng);

    const Eigen::VectorXd c0 = spec.basis().transpose() * y0;
    const Eigen::VectorXd c1 = spec.basis().transpose() * y1;
    for (int i = 0; i < d; ++i) {
      out[i].null_stats[r] = detectors[i].stat({y0, c0});
      out[i].alt_stats[r] = detectors[i].stat({y1, c1});
    }
  });
  return out;
}

std::vector<std::vector<double>> simulate_null_statistics(const Spectrum& spec,
                                                          const std::vector<Detector>& detectors,
                                                          double sigma, int n_reps,
                                                          std::uint64_t seed, int threads) {
  if (n_reps < 10) throw std::invalid_argument("simulate_null_statistics: n_reps must be >= 10");
  if (!(sigma > 0.0)) throw std::invalid_argument("simulate_null_statistics: sigma must be positive");
  const int p = spec.size();
  const int d = static_cast<int>(detectors.size());
  std::vector<std::vector<double>> out(d, std::vector<double>(n_reps));

  parallel_for(n_reps, threads, [&](int r) {
    std::mt19937_64 rng = substream(seed, static_cast<std::uint64_t>(r));
    std::normal_distribution<double> gauss(0.0, sigma);
    Signal y(p);
    for (int v = 0; v < p; ++v) y[v] = gauss(rng);
    const Eigen::VectorXd c = spec.basis().transpose() * y;
    for (int i = 0; i < d; ++i) out[i][r] = detectors[i].stat({y, c});
  });
  return out;
}

RocCurve make_roc(const DetectorStats& stats) {
  const int n = static_cast<int>(stats.null_stats.size());
  std::vector<double> nulls = stats.null_stats;
  std::vector<double> alts = stats.alt_stats;
  std::sort(nulls.begin(), nulls.end());
  std::sort(alts.begin(), alts.end());

  // sweep thresholds over the pooled values, descending
  std::vector<double> pooled;
  pooled.reserve(2 * n);
  pooled.insert(pooled.end(), nulls.begin(), nulls.end());
  pooled.insert(pooled.end(), alts.begin(), alts.end());
  std::sort(pooled.begin(), pooled.end());
  pooled.erase(std::unique(pooled.begin(), pooled.end()), pooled.end());

  RocCurve curve;
  curve.detector = stats.detector;
  curve.n_reps = n;
  curve.points.push_back({0.0, 0.0});
  for (auto it = pooled.rbegin(); it != pooled.rend(); ++it) {
    const double thr = *it;
    const double fa =
        static_cast<double>(nulls.end() - std::upper_bound(nulls.begin(), nulls.end(), thr)) / n;
    const double det =
        static_cast<double>(alts.end() - std::upper_bound(alts.begin(), alts.end(), thr)) / n;
    if (fa != curve.points.back().fa_rate || det != curve.points.back().det_rate)
      curve.points.push_back({fa, det});
  }
  if (curve.points.back().fa_rate != 1.0 || curve.points.back().det_rate != 1.0)
    curve.points.push_back({1.0, 1.0});
  curve.auc = auc_from_stats(stats.null_stats, stats.alt_stats);
  return curve;
}

std::vector<RocCurve> simulate_roc(const Graph& g, const Spectrum& spec,
                                   const std::vector<Detector>& detectors,
                                   const SignalModel& model, double sigma, int n_reps,
                                   std::uint64_t seed, int threads) {
  std::vector<RocCurve> curves;
  for (const DetectorStats& s :
       simulate_statistics(g, spec, detectors, model, sigma, n_reps, seed, threads))
    curves.push_back(make_roc(s));
  return curves;
}

double detection_at_false_alarm(const std::vector<double>& null_stats,
                                const std::vector<double>& alt_stats, double fa_target) {
  if (null_stats.empty() || alt_stats.empty())
    throw std::invalid_argument("detection_at_false_alarm: empty statistics");
  if (!(fa_target >= 0.0) || fa_target >= 1.0)
    throw std::invalid_argument("detection_at_false_alarm: fa_target must lie in [0,1)");
  std::vector<double> nulls = null_stats;
  std::sort(nulls.begin(), nulls.end(), std::greater<>());
  const int k = static_cast<int>(std::floor(fa_target * nulls.size()));
  const double thr = nulls[k];
  int det = 0;
  for (double s : alt_stats) {
    if (s > thr) ++det;
  }
  return static_cast<double>(det) / alt_stats.size();
}

double auc_from_stats(const std::vector<double>& null_stats,
                      const std::vector<double>& alt_stats) {
  std::vector<double> nulls = null_stats;
  std::sort(nulls.begin(), nulls.end());
  double total = 0.0;
  for (double a : alt_stats) {
    const auto lo = std::lower_bound(nulls.begin(), nulls.end(), a);
    const auto hi = std::upper_bound(nulls.begin(), nulls.end(), a);
    total += (lo - nulls.begin()) + 0.5 * (hi - lo);
  }
  return total / (static_cast<double>(nulls.size()) * alt_stats.size());
}

VertexSet bbt_subtree_cluster(int depth, double target_size, std::mt19937_64* rng) {
  if (depth < 1) throw std::invalid_argument("bbt_subtree_cluster: depth must be >= 1");
  if (!(target_size >= 1.0))
    throw std::invalid_argument("bbt_subtree_cluster: target size must be >= 1");
  const int p = (1 << (depth + 1)) - 1;
  // complete subtree rooted at tree-depth d has 2^(depth-d+1) - 1 vertices;
  // pick the subtree size closest to the target (root excluded to keep the
  // cluster proper)
  int best_d = depth;
  double best_err = std::numeric_limits<double>::infinity();
  for (int d = 1; d <= depth; ++d) {
    const double size = (1 << (depth - d + 1)) - 1;
    const double err = std::abs(size - target_size);
    if (err < best_err) {
      best_err = err;
      best_d = d;
    }
  }
  const int first = (1 << best_d) - 1;  // first vertex at that tree-depth
  int root = first;
  if (rng) {
    std::uniform_int_distribution<int> pick(first, 2 * first);  // depth-d row is [2^d-1, 2^(d+1)-1)
    root = pick(*rng);
  }
  std::vector<int> members;
  std::vector<int> stack{root};
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    members.push_back(v);
    for (int c : {2 * v + 1, 2 * v + 2}) {
      if (c < p) stack.push_back(c);
    }
  }
  return VertexSet(std::move(members));
}

VertexSet torus_square_cluster(int side, int k, std::mt19937_64* rng) {
  if (side < 3) throw std::invalid_argument("torus_square_cluster: side must be >= 3");
  if (k < 1 || k >= side)
    throw std::invalid_argument("torus_square_cluster: k must lie in [1, side)");
  int r0 = 0, c0 = 0;
  if (rng) {
    std::uniform_int_distribution<int> pick(0, side - 1);
    r0 = pick(*rng);
    c0 = pick(*rng);
  }
  std::vector<int> members;
  members.reserve(static_cast<std::size_t>(k) * k);
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j)
      members.push_back(((r0 + i) % side) * side + ((c0 + j) % side));
  }
  return VertexSet(std::move(members));
}

VertexSet kron_prefix_cluster(int base_count, int levels, int scale, std::mt19937_64* rng) {
  if (base_count < 2) throw std::invalid_argument("kron_prefix_cluster: base must have >= 2 vertices");
  if (levels < 1) throw std::invalid_argument("kron_prefix_cluster: levels must be >= 1");
  if (scale < 1 || scale > levels)
    throw std::invalid_argument("kron_prefix_cluster: scale must lie in [1, levels]");
  int block = 1;
  for (int j = scale + 1; j <= levels; ++j) block *= base_count;  // p0^(levels-scale)
  int offset = 0;
  if (rng) {
    std::uniform_int_distribution<int> pick(0, base_count - 1);
    for (int j = 1; j <= scale; ++j) offset = offset * base_count + pick(*rng);
  }
  std::vector<int> members(block);
  for (int i = 0; i < block; ++i) members[i] = offset * block + i;
  return VertexSet(std::move(members));
}

int graph_diameter(const Graph& g) {
  const int p = g.vertex_count();
  if (!g.connected()) throw std::invalid_argument("graph_diameter: graph must be connected");
  std::vector<std::vector<int>> adj(p);
  for (const Edge& e : g.edges()) {
    adj[e.u].push_back(e.v);
    adj[e.v].push_back(e.u);
  }
  int diam = 0;
  std::vector<int> dist(p);
  for (int s = 0; s < p; ++s) {
    std::fill(dist.begin(), dist.end(), -1);
    std::queue<int> q;
    q.push(s);
    dist[s] = 0;
    while (!q.empty()) {
      const int v = q.front();
      q.pop();
      diam = std::max(diam, dist[v]);
      for (int w : adj[v]) {
        if (dist[w] < 0) {
          dist[w] = dist[v] + 1;
          q.push(w);
        }
      }
    }
  }
  return diam;
}

namespace {

Detector sweep_detector(const std::string& label, const Spectrum& spec, double rho, double alpha) {
  if (label == "gfss") return gfss_detector(spec, rho);
  if (label == "adaptive") return adaptive_detector(spec, alpha);
  if (label == "energy") return energy_detector();
  if (label == "max") return max_detector();
  if (label == "aggregate") return aggregate_detector();
  throw std::invalid_argument("snr_sweep: unknown detector label '" + label + "'");
}

}  // namespace

std::vector<SweepRow> snr_sweep(const SweepConfig& config, int threads) {
  if (config.sizes.empty()) throw std::invalid_argument("snr_sweep: sizes must be non-empty");
  const bool is_bbt = config.family == "bbt";
  const bool is_torus = config.family == "torus";
  const bool is_kron = config.family == "kron";
  if (!is_bbt && !is_torus && !is_kron)
    throw std::invalid_argument("snr_sweep: unknown family label '" + config.family + "'");
  if (is_kron && !config.kron_base)
    throw std::invalid_argument("snr_sweep: kron family requires a base graph");

  std::vector<SweepRow> rows;
  rows.reserve(config.sizes.size());
  for (std::size_t idx = 0; idx < config.sizes.size(); ++idx) {
    const int size = config.sizes[idx];
    Graph g = is_bbt     ? balanced_binary_tree(size)
              : is_torus ? torus(size)
                         : kronecker_graph(*config.kron_base, size);
    const int p = g.vertex_count();
    const double logp = std::log(static_cast<double>(p));

    VertexSet cluster{{0}};
    double rho = 1.0;
    double rate = 1.0;
    if (is_bbt) {
      const double a = config.cluster_exponent;
      cluster = bbt_subtree_cluster(size, config.cluster_fraction * std::pow(p, a));
      const double s = cluster.size();
      rho = p / (s * (p - s));  // subtrees have cut weight 1
      const double expo = config.rate_exponent_override.value_or((1.0 - a) / 4.0);
      rate = std::pow(p, expo) * std::sqrt(logp);
    } else if (is_torus) {
      const double b = config.cluster_exponent;
      const int k = std::max(1, static_cast<int>(std::lround(std::pow(p, (1.0 - b) / 2.0))));
      cluster = torus_square_cluster(size, std::min(k, size - 1));
      rho = config.cluster_fraction * std::pow(p, -(1.0 - b) / 2.0);
      const double expo = config.rate_exponent_override.value_or(3.0 / 20.0 + b / 10.0);
      rate = std::pow(p, expo) * std::pow(logp, 0.25);
    } else {
      const int p0 = config.kron_base->vertex_count();
      const int k = config.kron_scale;
      cluster = kron_prefix_cluster(p0, size, k);
      rho = std::pow(static_cast<double>(p0), 2 * k - size - 1);
      const double diam = graph_diameter(*config.kron_base);
      const double expo =
          config.rate_exponent_override.value_or(static_cast<double>(k) / (2.0 * size));
      rate = std::pow(p, expo) * std::pow(diam * logp, 0.25);
    }

    const double mu = config.snr_constant * rate * config.sigma;
    const Spectrum spec = eigendecompose(g.laplacian());
    const Detector det = sweep_detector(config.detector, spec, rho, config.alpha);
    SignalModel model{SignalModel::Kind::PiecewiseConstant, cluster, mu, 0.0, 1.0};
    const auto stats = simulate_statistics(g, spec, {det}, model, config.sigma, config.n_reps,
                                           config.seed + idx, threads);
    rows.push_back({size, p, mu / config.sigma,
                    detection_at_false_alarm(stats[0].null_stats, stats[0].alt_stats,
                                             config.fa_target)});
  }
  return rows;
}

}  // namespace gfss
