#include "gfss/graph.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <queue>
#include <set>
#include <stdexcept>
#include <string>

namespace gfss {

namespace {

bool bfs_reaches_all(int p, const std::vector<Edge>& edges) {
  if (p <= 1) return true;
  std::vector<std::vector<int>> adj(p);
  for (const Edge& e : edges) {
    adj[e.u].push_back(e.v);
    adj[e.v].push_back(e.u);
  }
  std::vector<char> seen(p, 0);
  std::queue<int> q;
  q.push(0);
  seen[0] = 1;
  int count = 1;
  while (!q.empty()) {
    int v = q.front();
    q.pop();
    for (int w : adj[v]) {
      if (!seen[w]) {
        seen[w] = 1;
        ++count;
        q.push(w);
      }
    }
  }
  return count == p;
}

}  // namespace

Graph::Graph(int vertex_count, std::vector<Edge> edges) : p_(vertex_count) {
  if (p_ < 1) throw std::invalid_argument("Graph: vertex count must be positive");
  for (Edge& e : edges) {
    if (e.u < 0 || e.u >= p_ || e.v < 0 || e.v >= p_)
      throw std::invalid_argument("Graph: vertex index out of range");
    if (e.u == e.v) throw std::invalid_argument("Graph: self-loops are not allowed");
    if (!(e.weight > 0.0) || !std::isfinite(e.weight))
      throw std::invalid_argument("Graph: edge weights must be strictly positive and finite");
    if (e.u > e.v) std::swap(e.u, e.v);
  }
  std::sort(edges.begin(), edges.end(),
            [](const Edge& a, const Edge& b) { return std::tie(a.u, a.v) < std::tie(b.u, b.v); });
  for (std::size_t i = 1; i < edges.size(); ++i) {
    if (edges[i - 1].u == edges[i].u && edges[i - 1].v == edges[i].v)
      throw std::invalid_argument("Graph: duplicate edge (" + std::to_string(edges[i].u) + "," +
                                  std::to_string(edges[i].v) + ")");
  }
  edges_ = std::move(edges);
  connected_ = bfs_reaches_all(p_, edges_);
}

std::vector<double> Graph::degrees() const {
  std::vector<double> d(p_, 0.0);
  for (const Edge& e : edges_) {
    d[e.u] += e.weight;
    d[e.v] += e.weight;
  }
  return d;
}

Eigen::MatrixXd Graph::laplacian() const {
  Eigen::MatrixXd lap = Eigen::MatrixXd::Zero(p_, p_);
  for (const Edge& e : edges_) {
    lap(e.u, e.u) += e.weight;
    lap(e.v, e.v) += e.weight;
    lap(e.u, e.v) -= e.weight;
    lap(e.v, e.u) -= e.weight;
  }
  return lap;
}

VertexSet::VertexSet(std::vector<int> members) : members_(std::move(members)) {
  if (members_.empty()) throw std::invalid_argument("VertexSet: must be non-empty");
  std::sort(members_.begin(), members_.end());
  if (members_.front() < 0) throw std::invalid_argument("VertexSet: negative vertex index");
  if (std::adjacent_find(members_.begin(), members_.end()) != members_.end())
    throw std::invalid_argument("VertexSet: duplicate vertex index");
}

bool VertexSet::contains(int v) const {
  return std::binary_search(members_.begin(), members_.end(), v);
}

VertexSet VertexSet::complement(int vertex_count) const {
  std::vector<int> out;
  out.reserve(vertex_count - size());
  std::size_t k = 0;
  for (int v = 0; v < vertex_count; ++v) {
    if (k < members_.size() && members_[k] == v) {
      ++k;
    } else {
      out.push_back(v);
    }
  }
  if (k != members_.size())
    throw std::invalid_argument("VertexSet: member index outside [0, vertex_count)");
  return VertexSet(std::move(out));
}

std::vector<char> VertexSet::mask(int vertex_count) const {
  std::vector<char> m(vertex_count, 0);
  for (int v : members_) {
    if (v >= vertex_count)
      throw std::invalid_argument("VertexSet: member index outside [0, vertex_count)");
    m[v] = 1;
  }
  return m;
}

Graph balanced_binary_tree(int depth) {
  if (depth < 1) throw std::invalid_argument("balanced_binary_tree: depth must be >= 1");
  const int p = (1 << (depth + 1)) - 1;
  std::vector<Edge> edges;
  edges.reserve(p - 1);
  for (int i = 0; i < p; ++i) {
    for (int c : {2 * i + 1, 2 * i + 2}) {
      if (c < p) edges.push_back({i, c, 1.0});
    }
  }
  return Graph(p, std::move(edges));
}

Graph torus(int side) {
  if (side < 3) throw std::invalid_argument("torus: side must be >= 3");
  const int p = side * side;
  auto id = [side](int i, int j) { return i * side + j; };
  std::vector<Edge> edges;
  edges.reserve(2 * p);
  for (int i = 0; i < side; ++i) {
    for (int j = 0; j < side; ++j) {
      edges.push_back({id(i, j), id((i + 1) % side, j), 1.0});
      edges.push_back({id(i, j), id(i, (j + 1) % side), 1.0});
    }
  }
  return Graph(p, std::move(edges));
}

Graph kronecker_graph(const Graph& base, int levels) {
  if (levels < 1) throw std::invalid_argument("kronecker_graph: levels must be >= 1");
  if (base.vertex_count() < 2)
    throw std::invalid_argument("kronecker_graph: base must have >= 2 vertices");
  if (!base.connected()) throw std::invalid_argument("kronecker_graph: base must be connected");
  const int p0 = base.vertex_count();

  std::int64_t p64 = 1;
  for (int i = 0; i < levels; ++i) {
    p64 *= p0;
    if (p64 > (1 << 24)) throw std::invalid_argument("kronecker_graph: result too large");
  }
  const int p = static_cast<int>(p64);

  // stride of coordinate j (1-based, coordinate 1 most significant)
  std::vector<int> stride(levels + 1, 1);
  for (int j = levels - 1; j >= 1; --j) stride[j] = stride[j + 1] * p0;

  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(levels) * base.edges().size() * (p / p0));
  for (int j = 1; j <= levels; ++j) {
    const double scale = std::pow(static_cast<double>(p0), j - levels);
    const int s = stride[j];
    // enumerate all tuples with coordinate j split off: v = hi*(s*p0) + c*s + lo
    const int hi_count = p / (s * p0);
    for (const Edge& be : base.edges()) {
      for (int hi = 0; hi < hi_count; ++hi) {
        const int base_index = hi * s * p0;
        for (int lo = 0; lo < s; ++lo) {
          edges.push_back(
              {base_index + be.u * s + lo, base_index + be.v * s + lo, be.weight * scale});
        }
      }
    }
  }
  return Graph(p, std::move(edges));
}

Graph knn_graph(const std::vector<std::vector<double>>& points, int k) {
  const int n = static_cast<int>(points.size());
  if (n < 2) throw std::invalid_argument("knn_graph: need at least 2 points");
  if (k < 1) throw std::invalid_argument("knn_graph: k must be >= 1");
  if (k >= n) throw std::invalid_argument("knn_graph: k must be smaller than the number of points");
  const std::size_t dim = points[0].size();
  if (dim == 0) throw std::invalid_argument("knn_graph: points must have >= 1 coordinate");
  for (const auto& pt : points) {
    if (pt.size() != dim) throw std::invalid_argument("knn_graph: inconsistent point dimensions");
  }

  auto dist2 = [&](int a, int b) {
    double s = 0.0;
    for (std::size_t d = 0; d < dim; ++d) {
      const double t = points[a][d] - points[b][d];
      s += t * t;
    }
    return s;
  };

  std::set<std::pair<int, int>> pairs;
  std::vector<std::pair<double, int>> cand;
  cand.reserve(n - 1);
  for (int i = 0; i < n; ++i) {
    cand.clear();
    for (int j = 0; j < n; ++j) {
      if (j != i) cand.push_back({dist2(i, j), j});
    }
    // ties toward the smaller index
    std::nth_element(cand.begin(), cand.begin() + (k - 1), cand.end());
    std::sort(cand.begin(), cand.begin() + k);
    for (int t = 0; t < k; ++t) {
      const int j = cand[t].second;
      pairs.insert({std::min(i, j), std::max(i, j)});
    }
  }
  std::vector<Edge> edges;
  edges.reserve(pairs.size());
  for (const auto& [u, v] : pairs) edges.push_back({u, v, 1.0});
  return Graph(n, std::move(edges));
}

double boundary_weight(const Graph& g, const VertexSet& c) {
  const std::vector<char> in = c.mask(g.vertex_count());
  double w = 0.0;
  for (const Edge& e : g.edges()) {
    if (in[e.u] != in[e.v]) w += e.weight;
  }
  return w;
}

double cut_sparsity(const Graph& g, const VertexSet& c) {
  const int p = g.vertex_count();
  const int size = c.size();
  if (size <= 0 || size >= p)
    throw std::invalid_argument("cut_sparsity: cluster must be a proper non-empty subset");
  return static_cast<double>(p) * boundary_weight(g, c) /
         (static_cast<double>(size) * static_cast<double>(p - size));
}

}  // namespace gfss
