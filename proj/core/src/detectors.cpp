#include "gfss/detectors.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <sstream>
#include <stdexcept>

#include "gfss/errors.hpp"

namespace gfss {

namespace {

void check_dims(const Spectrum& spec, const Signal& y, const char* where) {
  if (y.size() != spec.size())
    throw std::invalid_argument(std::string(where) + ": signal length does not match graph size");
}

void check_rho(double rho, const char* where) {
  if (!(rho > 0.0)) throw std::invalid_argument(std::string(where) + ": rho must be positive");
}

}  // namespace

Eigen::VectorXd graph_fourier(const Spectrum& spec, const Signal& y) {
  check_dims(spec, y, "graph_fourier");
  return spec.basis().transpose() * y;
}

double gfss_stat(const Spectrum& spec, const Signal& y, double rho) {
  check_dims(spec, y, "gfss_stat");
  check_rho(rho, "gfss_stat");
  if (!spec.connected()) throw std::invalid_argument("gfss_stat: spectrum must be connected");
  const Eigen::VectorXd coeffs = graph_fourier(spec, y);
  double t = 0.0;
  for (int i = 1; i < spec.size(); ++i) {
    const double w = std::min(1.0, rho / spec.eigenvalue(i));
    t += w * (coeffs[i] * coeffs[i] - 1.0);
  }
  return t;
}

double gfss_via_projection(const Graph& g, const Spectrum& spec, const Signal& y, double rho) {
  check_dims(spec, y, "gfss_via_projection");
  check_rho(rho, "gfss_via_projection");
  if (!spec.connected())
    throw std::invalid_argument("gfss_via_projection: spectrum must be connected");
  const int p = spec.size();
  if (g.vertex_count() != p)
    throw std::invalid_argument("gfss_via_projection: graph and spectrum sizes differ");

  // top-j eigenspace, strict inequality: j = max{i : lambda_i < rho}
  int j = 1;
  while (j < p && spec.eigenvalue(j) < rho) ++j;
  // projection term over u_2..u_j
  double head = 0.0;
  Eigen::VectorXd residual = y;
  {
    const Eigen::VectorXd u1 = spec.basis().col(0);
    residual -= (u1.dot(y)) * u1;
  }
  for (int i = 1; i < j; ++i) {
    const Eigen::VectorXd ui = spec.basis().col(i);
    const double ci = ui.dot(y);
    head += ci * ci;
    residual -= ci * ui;
  }

  // pinv(L) w for w orthogonal to 1: solve (L + (1/p) 1 1^T) z = w, which is
  // positive definite and agrees with the pseudo-inverse on that subspace.
  Eigen::MatrixXd aug = g.laplacian();
  aug.array() += 1.0 / static_cast<double>(p);
  const Eigen::VectorXd z = aug.ldlt().solve(residual);
  const double tail = rho * residual.dot(z);

  return head + tail - spectral_sum_s1(spec, rho);
}

double energy_stat(const Signal& y) {
  if (y.size() == 0) throw std::invalid_argument("energy_stat: empty signal");
  const double mean = y.mean();
  return (y.array() - mean).square().sum();
}

double max_stat(const Signal& y) {
  if (y.size() == 0) throw std::invalid_argument("max_stat: empty signal");
  const double mean = y.mean();
  return (y.array() - mean).abs().maxCoeff();
}

double aggregate_stat(const Signal& y) {
  if (y.size() == 0) throw std::invalid_argument("aggregate_stat: empty signal");
  return y.sum();
}

double lr_stat(const Signal& y, const VertexSet& c, double sigma) {
  const int p = static_cast<int>(y.size());
  if (!(sigma > 0.0)) throw std::invalid_argument("lr_stat: sigma must be positive");
  if (c.size() <= 0 || c.size() >= p)
    throw std::invalid_argument("lr_stat: cluster must be a proper non-empty subset");
  const double mean = y.mean();
  double cluster_sum = 0.0;
  for (int v : c.members()) {
    if (v >= p) throw std::invalid_argument("lr_stat: vertex index out of range");
    cluster_sum += y[v] - mean;
  }
  const double size = c.size();
  return (1.0 / (sigma * sigma)) * (p / (size * (p - size))) * cluster_sum * cluster_sum;
}

namespace {

// Lexicographic order on the sorted member lists encoded by two bitmasks.
bool mask_lex_less(std::uint32_t a, std::uint32_t b, int p) {
  int ia = 0, ib = 0;
  for (;;) {
    while (ia < p && !((a >> ia) & 1u)) ++ia;
    while (ib < p && !((b >> ib) & 1u)) ++ib;
    const bool ea = ia >= p, eb = ib >= p;
    if (ea || eb) return !eb && ea;  // a proper prefix compares smaller
    if (ia != ib) return ia < ib;
    ++ia;
    ++ib;
  }
}

}  // namespace

GlrResult glr_scan(const Graph& g, const Signal& y, double rho, double sigma,
                   int exhaustive_limit) {
  const int p = g.vertex_count();
  if (y.size() != p) throw std::invalid_argument("glr_scan: signal length does not match graph");
  check_rho(rho, "glr_scan");
  if (!(sigma > 0.0)) throw std::invalid_argument("glr_scan: sigma must be positive");
  if (!g.connected()) throw std::invalid_argument("glr_scan: graph must be connected");
  if (p < 2) throw std::invalid_argument("glr_scan: need at least 2 vertices");
  if (p > exhaustive_limit || p > 30)
    throw std::invalid_argument("glr_scan: vertex count exceeds the exhaustive limit of " +
                                std::to_string(std::min(exhaustive_limit, 30)));

  const double mean = y.mean();
  Eigen::VectorXd centered = y.array() - mean;

  // Enumerate proper subsets containing vertex 0; C and its complement share
  // both the statistic and the sparsity, and the half containing vertex 0 is
  // always the lexicographically smaller of the pair.
  const std::uint32_t mask_count = 1u << (p - 1);
  double best = 0.0;
  std::uint32_t best_bits = 0;
  bool found = false;
  for (std::uint32_t bits = 0; bits + 1 < mask_count; ++bits) {
    const std::uint32_t full = (bits << 1) | 1u;  // vertex 0 plus the encoded rest
    double boundary = 0.0;
    for (const Edge& e : g.edges()) {
      const bool in_u = (full >> e.u) & 1u;
      const bool in_v = (full >> e.v) & 1u;
      if (in_u != in_v) boundary += e.weight;
    }
    const int size = std::popcount(full);
    const double sparsity =
        static_cast<double>(p) * boundary / (static_cast<double>(size) * (p - size));
    if (sparsity > rho) continue;

    double cluster_sum = 0.0;
    for (int v = 0; v < p; ++v) {
      if ((full >> v) & 1u) cluster_sum += centered[v];
    }
    const double value =
        (static_cast<double>(p) / (static_cast<double>(size) * (p - size))) * cluster_sum *
        cluster_sum;
    if (!found || value > best || (value == best && mask_lex_less(full, best_bits, p))) {
      best = value;
      best_bits = full;
      found = true;
    }
  }
  if (!found)
    throw EmptyClassError("glr_scan: no cluster satisfies cut_sparsity <= " + std::to_string(rho));

  std::vector<int> members;
  for (int v = 0; v < p; ++v) {
    if ((best_bits >> v) & 1u) members.push_back(v);
  }
  return GlrResult{best, VertexSet(std::move(members))};
}

namespace {

// Rayleigh quotient d^T M d / d^T d for d = (I + t M)^{-1} b, M diagonal.
double mixture_ratio(const Eigen::VectorXd& b, const Eigen::VectorXd& m, double t) {
  double num = 0.0, den = 0.0;
  for (Eigen::Index i = 0; i < b.size(); ++i) {
    const double d = b[i] / (1.0 + t * m[i]);
    num += m[i] * d * d;
    den += d * d;
  }
  return num / den;
}

double mixture_value(const Eigen::VectorXd& b, const Eigen::VectorXd& m, double t) {
  double bd = 0.0, den = 0.0;
  for (Eigen::Index i = 0; i < b.size(); ++i) {
    const double d = b[i] / (1.0 + t * m[i]);
    bd += b[i] * d;
    den += d * d;
  }
  return bd / std::sqrt(den);
}

}  // namespace

double sss_stat(const Spectrum& spec, const Signal& y, double rho) {
  check_dims(spec, y, "sss_stat");
  check_rho(rho, "sss_stat");
  if (!spec.connected()) throw std::invalid_argument("sss_stat: spectrum must be connected");
  const int p = spec.size();

  // reduce to the eigenbasis orthogonal to constants
  const Eigen::VectorXd coeffs = graph_fourier(spec, y);
  Eigen::VectorXd b(p - 1), m(p - 1);
  for (int i = 1; i < p; ++i) {
    b[i - 1] = coeffs[i];
    m[i - 1] = spec.eigenvalue(i) / rho;
  }
  const double b_norm2 = b.squaredNorm();
  if (b_norm2 == 0.0) return 0.0;

  // ball constraint alone: z = b/||b|| feasible iff b^T M b <= ||b||^2
  const double bmb = (m.array() * b.array().square()).sum();
  if (bmb <= b_norm2) return b_norm2;

  // ellipsoid constraint alone: z = M^{-1} b / sqrt(b^T M^{-1} b)
  double bm1b = 0.0, bm2b = 0.0;
  for (Eigen::Index i = 0; i < b.size(); ++i) {
    bm1b += b[i] * b[i] / m[i];
    bm2b += b[i] * b[i] / (m[i] * m[i]);
  }
  if (bm2b <= bm1b) return bm1b;

  // Both constraints active. The KKT direction is d(t) = (I + t M)^{-1} b
  // with t the multiplier ratio; both constraints hold with equality exactly
  // when the Rayleigh quotient r(t) = d^T M d / d^T d equals 1. r decreases
  // from r(0) > 1 toward b^T M^{-1} b / b^T M^{-2} b < 1, so a sign change
  // exists and bisection locates it.
  constexpr double kTol = 1e-10;
  double lo = 0.0, hi = 1.0;
  int expand = 0;
  while (mixture_ratio(b, m, hi) > 1.0) {
    lo = hi;
    hi *= 4.0;
    if (++expand > 200) {
      std::ostringstream msg;
      msg << "sss_stat: bracket expansion failed (rho=" << rho
          << ", r(hi)=" << mixture_ratio(b, m, hi) << ", hi=" << hi << ")";
      throw ConvergenceError(msg.str());
    }
  }
  double t_best = hi;
  double res_best = std::abs(mixture_ratio(b, m, hi) - 1.0);
  for (int it = 0; it < 400 && res_best > kTol; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double r_mid = mixture_ratio(b, m, mid);
    const double res = std::abs(r_mid - 1.0);
    if (res < res_best) {
      res_best = res;
      t_best = mid;
    }
    if (r_mid > 1.0) {
      lo = mid;
    } else {
      hi = mid;
    }
    if (!(hi - lo > 0.0)) break;
  }
  if (res_best > kTol) {
    std::ostringstream msg;
    msg << "sss_stat: bisection did not converge (constraint residual=" << res_best
        << ", t=" << t_best << ", bracket=[" << lo << "," << hi << "])";
    throw ConvergenceError(msg.str());
  }
  const double opt = mixture_value(b, m, t_best);
  return opt * opt;
}

}  // namespace gfss
