#pragma once

#include <Eigen/Dense>
#include <vector>

namespace gfss {

struct Edge {
  int u = 0;  // canonical order u < v
  int v = 0;
  double weight = 1.0;
};

// Weighted undirected simple graph. Immutable after construction: the edge
// list is canonicalized (u < v, sorted, no self-loops or duplicates, strictly
// positive weights) and connectivity is established once by breadth-first
// search from vertex 0.
class Graph {
 public:
  Graph(int vertex_count, std::vector<Edge> edges);

  int vertex_count() const { return p_; }
  const std::vector<Edge>& edges() const { return edges_; }
  bool connected() const { return connected_; }

  // Weighted vertex degrees d_i = sum_j W_ij.
  std::vector<double> degrees() const;

  // Dense combinatorial Laplacian D - W. Symmetric, rows sum to zero, PSD.
  Eigen::MatrixXd laplacian() const;

 private:
  int p_;
  std::vector<Edge> edges_;
  bool connected_;
};

// Non-empty sorted set of distinct vertex indices; the complement is implicit.
class VertexSet {
 public:
  explicit VertexSet(std::vector<int> members);

  const std::vector<int>& members() const { return members_; }
  int size() const { return static_cast<int>(members_.size()); }
  bool contains(int v) const;
  VertexSet complement(int vertex_count) const;
  // 0/1 indicator over [0, vertex_count).
  std::vector<char> mask(int vertex_count) const;

 private:
  std::vector<int> members_;
};

// Complete binary tree of the given depth: p = 2^(depth+1) - 1 vertices in
// heap order (children of i are 2i+1, 2i+2), unit weights.
Graph balanced_binary_tree(int depth);

// side x side torus: vertices (i,j) in (Z mod side)^2 flattened as i*side+j,
// unit-weight edge when the wrap-around coordinate distance sums to 1.
// Requires side >= 3 so that no wrap-around edge duplicates another.
Graph torus(int side);

// Multi-scale Kronecker power of a connected base graph. Vertices are tuples
// (i_1,...,i_levels) over the base vertex set, flattened with coordinate 1
// most significant. Two tuples are adjacent when they differ in exactly one
// coordinate j at a base edge; the edge weight is the base weight scaled by
// p0^(j - levels), so coordinate 1 is the coarsest (cheapest to cut) scale.
Graph kronecker_graph(const Graph& base, int levels);

// Symmetrized k-nearest-neighbor graph of a point cloud: unit-weight edge
// between i and j when either is among the k nearest of the other
// (Euclidean distance; ties broken toward the smaller index).
Graph knn_graph(const std::vector<std::vector<double>>& points, int k);

// Total weight of edges crossing the cut (C, complement).
double boundary_weight(const Graph& g, const VertexSet& c);

// Cut sparsity p * W(boundary) / (|C| |complement|).
double cut_sparsity(const Graph& g, const VertexSet& c);

}  // namespace gfss
