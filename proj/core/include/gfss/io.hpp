#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gfss/adaptive.hpp"
#include "gfss/detectors.hpp"
#include "gfss/graph.hpp"
#include "gfss/sim.hpp"
#include "gfss/spectrum.hpp"

namespace gfss {

// Edge-list CSV with header "u,v,w": 0-based indices, one undirected edge per
// row in either orientation; duplicate unordered pairs with equal weight are
// merged, conflicting duplicates and self-loops are rejected. The vertex
// count is the largest index plus one.
Graph read_edge_list_csv(const std::string& path);

// Point cloud CSV: one row per point, one column per coordinate. A leading
// header row is detected (and skipped) when its first token is not numeric.
std::vector<std::vector<double>> read_point_cloud_csv(const std::string& path);

// {"p": int, "edges": [[u, v, w], ...]}
Graph read_graph_json(const std::string& path);
void write_graph_json(const Graph& g, const std::string& path);

// One value per line; the caller checks the length against the graph.
Signal read_signal_csv(const std::string& path);

// {"eigenvalues": [...], "p": int}; when sidecar_path is given the
// eigenvectors go to a binary sidecar: the 9 magic bytes "GFSSEVEC1", a
// little-endian uint64 vertex count, then p*p column-major little-endian
// 64-bit floats.
void write_spectrum_json(const Spectrum& spec, const std::string& path,
                         const std::optional<std::string>& sidecar_path = std::nullopt);
Spectrum read_spectrum(const std::string& json_path, const std::string& sidecar_path);

struct DetectionProvenance {
  std::optional<double> alpha;
  std::optional<double> sigma;
  std::optional<int> n_perm;
  std::optional<std::uint64_t> seed;
};

std::string detection_result_json(const DetectionResult& result,
                                  const DetectionProvenance& provenance);

// Adds the per-knot (j, rho_j, t, tau) rows when verbose is set.
std::string adaptive_result_json(const AdaptiveResult& result, double alpha, bool verbose);

// "detector,fa_rate,det_rate"
void write_roc_csv(const std::vector<RocCurve>& curves, const std::string& path);

// "size,snr,det_rate"
void write_sweep_csv(const std::vector<SweepRow>& rows, const std::string& path);

}  // namespace gfss
