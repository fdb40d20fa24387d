#include "gfss/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <json.hpp>
#include <map>
#include <sstream>
#include <stdexcept>

namespace gfss {

namespace {

using nlohmann::json;

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  return in;
}

std::ofstream open_out(const std::string& path, std::ios::openmode mode = std::ios::out) {
  std::ofstream out(path, mode);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  return out;
}

std::vector<std::string> split_csv_row(const std::string& line) {
  std::vector<std::string> fields;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) {
    // trim surrounding whitespace
    const auto b = field.find_first_not_of(" \t\r");
    const auto e = field.find_last_not_of(" \t\r");
    fields.push_back(b == std::string::npos ? "" : field.substr(b, e - b + 1));
  }
  return fields;
}

bool parse_double(const std::string& s, double& out) {
  try {
    std::size_t pos = 0;
    out = std::stod(s, &pos);
    return pos == s.size();
  } catch (...) {
    return false;
  }
}

}  // namespace

Graph read_edge_list_csv(const std::string& path) {
  std::ifstream in = open_in(path);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error(path + ": empty edge-list file");
  {
    const auto header = split_csv_row(line);
    if (header.size() != 3 || header[0] != "u" || header[1] != "v" || header[2] != "w")
      throw std::runtime_error(path + ": expected header \"u,v,w\"");
  }
  std::map<std::pair<int, int>, double> pairs;
  int max_vertex = -1;
  int row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) continue;
    const auto f = split_csv_row(line);
    if (f.size() != 3)
      throw std::runtime_error(path + ": row " + std::to_string(row) + " must have 3 fields");
    double du, dv, w;
    if (!parse_double(f[0], du) || !parse_double(f[1], dv) || !parse_double(f[2], w) ||
        du != std::floor(du) || dv != std::floor(dv))
      throw std::runtime_error(path + ": row " + std::to_string(row) + " is malformed");
    const int u = static_cast<int>(du), v = static_cast<int>(dv);
    if (u < 0 || v < 0)
      throw std::runtime_error(path + ": row " + std::to_string(row) + " has a negative index");
    if (u == v)
      throw std::runtime_error(path + ": row " + std::to_string(row) + " is a self-loop");
    const std::pair<int, int> key = std::minmax(u, v);
    auto [it, inserted] = pairs.emplace(key, w);
    if (!inserted && it->second != w)
      throw std::runtime_error(path + ": row " + std::to_string(row) +
                               " repeats an edge with a different weight");
    max_vertex = std::max({max_vertex, u, v});
  }
  std::vector<Edge> edges;
  edges.reserve(pairs.size());
  for (const auto& [key, w] : pairs) edges.push_back({key.first, key.second, w});
  return Graph(max_vertex + 1, std::move(edges));
}

std::vector<std::vector<double>> read_point_cloud_csv(const std::string& path) {
  std::ifstream in = open_in(path);
  std::vector<std::vector<double>> points;
  std::string line;
  bool first = true;
  int row = 0;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) continue;
    const auto fields = split_csv_row(line);
    std::vector<double> coords;
    coords.reserve(fields.size());
    bool ok = !fields.empty();
    for (const auto& f : fields) {
      double x;
      if (!parse_double(f, x)) {
        ok = false;
        break;
      }
      coords.push_back(x);
    }
    if (!ok) {
      if (first) {  // header row
        first = false;
        continue;
      }
      throw std::runtime_error(path + ": row " + std::to_string(row) + " is not numeric");
    }
    first = false;
    if (!points.empty() && coords.size() != points.front().size())
      throw std::runtime_error(path + ": row " + std::to_string(row) +
                               " has an inconsistent column count");
    points.push_back(std::move(coords));
  }
  if (points.empty()) throw std::runtime_error(path + ": no points found");
  return points;
}

Graph read_graph_json(const std::string& path) {
  std::ifstream in = open_in(path);
  json doc;
  try {
    in >> doc;
  } catch (const json::parse_error& e) {
    throw std::runtime_error(path + ": invalid JSON (" + e.what() + ")");
  }
  if (!doc.contains("p") || !doc["p"].is_number_integer())
    throw std::runtime_error(path + ": missing integer field \"p\"");
  if (!doc.contains("edges") || !doc["edges"].is_array())
    throw std::runtime_error(path + ": missing array field \"edges\"");
  const int p = doc["p"].get<int>();
  std::vector<Edge> edges;
  edges.reserve(doc["edges"].size());
  for (const auto& e : doc["edges"]) {
    if (!e.is_array() || e.size() != 3)
      throw std::runtime_error(path + ": each edge must be [u, v, w]");
    edges.push_back({e[0].get<int>(), e[1].get<int>(), e[2].get<double>()});
  }
  return Graph(p, std::move(edges));
}

void write_graph_json(const Graph& g, const std::string& path) {
  json doc;
  doc["p"] = g.vertex_count();
  json edges = json::array();
  for (const Edge& e : g.edges()) edges.push_back({e.u, e.v, e.weight});
  doc["edges"] = std::move(edges);
  open_out(path) << doc.dump(2) << "\n";
}

Signal read_signal_csv(const std::string& path) {
  std::ifstream in = open_in(path);
  std::vector<double> values;
  std::string line;
  int row = 0;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) continue;
    double x;
    if (!parse_double(line, x) || !std::isfinite(x))
      throw std::runtime_error(path + ": line " + std::to_string(row) +
                               " is not a finite number");
    values.push_back(x);
  }
  if (values.empty()) throw std::runtime_error(path + ": empty signal file");
  return Eigen::Map<Signal>(values.data(), static_cast<Eigen::Index>(values.size()));
}

namespace {
constexpr char kEvecMagic[9] = {'G', 'F', 'S', 'S', 'E', 'V', 'E', 'C', '1'};
}

void write_spectrum_json(const Spectrum& spec, const std::string& path,
                         const std::optional<std::string>& sidecar_path) {
  json doc;
  doc["p"] = spec.size();
  doc["eigenvalues"] = std::vector<double>(spec.eigenvalues().data(),
                                           spec.eigenvalues().data() + spec.size());
  open_out(path) << doc.dump(2) << "\n";

  if (!sidecar_path) return;
  std::ofstream out = open_out(*sidecar_path, std::ios::binary);
  out.write(kEvecMagic, sizeof(kEvecMagic));
  const std::uint64_t p = static_cast<std::uint64_t>(spec.size());
  out.write(reinterpret_cast<const char*>(&p), sizeof(p));
  // Eigen stores column-major; dump as-is (host assumed little-endian)
  out.write(reinterpret_cast<const char*>(spec.basis().data()),
            static_cast<std::streamsize>(sizeof(double) * p * p));
  if (!out) throw std::runtime_error("failed writing eigenvector sidecar: " + *sidecar_path);
}

Spectrum read_spectrum(const std::string& json_path, const std::string& sidecar_path) {
  std::ifstream in = open_in(json_path);
  json doc;
  try {
    in >> doc;
  } catch (const json::parse_error& e) {
    throw std::runtime_error(json_path + ": invalid JSON (" + e.what() + ")");
  }
  if (!doc.contains("eigenvalues") || !doc["eigenvalues"].is_array())
    throw std::runtime_error(json_path + ": missing array field \"eigenvalues\"");
  const auto vals = doc["eigenvalues"].get<std::vector<double>>();
  const Eigen::Index p = static_cast<Eigen::Index>(vals.size());

  std::ifstream side(sidecar_path, std::ios::binary);
  if (!side) throw std::runtime_error("cannot open for reading: " + sidecar_path);
  char magic[9];
  side.read(magic, sizeof(magic));
  if (!side || std::memcmp(magic, kEvecMagic, sizeof(magic)) != 0)
    throw std::runtime_error(sidecar_path + ": bad eigenvector sidecar magic");
  std::uint64_t stored_p = 0;
  side.read(reinterpret_cast<char*>(&stored_p), sizeof(stored_p));
  if (!side || stored_p != static_cast<std::uint64_t>(p))
    throw std::runtime_error(sidecar_path + ": sidecar size does not match eigenvalue count");
  Eigen::MatrixXd basis(p, p);
  side.read(reinterpret_cast<char*>(basis.data()),
            static_cast<std::streamsize>(sizeof(double) * p * p));
  if (!side) throw std::runtime_error(sidecar_path + ": truncated eigenvector sidecar");

  Eigen::VectorXd values = Eigen::Map<const Eigen::VectorXd>(vals.data(), p);
  return Spectrum(std::move(values), std::move(basis));
}

std::string detection_result_json(const DetectionResult& result,
                                  const DetectionProvenance& provenance) {
  json doc;
  doc["method"] = result.method;
  doc["statistic"] = result.statistic;
  if (result.threshold) doc["threshold"] = *result.threshold;
  if (result.p_value) doc["p_value"] = *result.p_value;
  if (result.reject) doc["reject"] = *result.reject;
  if (result.rho) doc["rho"] = *result.rho;
  if (result.zscore) doc["zscore"] = *result.zscore;
  json params = json::object();
  if (provenance.alpha) params["alpha"] = *provenance.alpha;
  if (provenance.sigma) params["sigma"] = *provenance.sigma;
  if (provenance.n_perm) params["n_perm"] = *provenance.n_perm;
  if (provenance.seed) params["seed"] = *provenance.seed;
  doc["params"] = std::move(params);
  return doc.dump(2);
}

std::string adaptive_result_json(const AdaptiveResult& result, double alpha, bool verbose) {
  json doc;
  doc["method"] = "adaptive";
  doc["reject"] = result.reject;
  doc["margin"] = result.margin;
  doc["alpha"] = alpha;
  if (result.witness) {
    doc["witness"] = {{"knot", result.witness->knot},
                      {"rho", result.witness->rho},
                      {"tstat", result.witness->tstat},
                      {"threshold", result.witness->threshold}};
  }
  if (verbose) {
    json rows = json::array();
    for (const KnotRow& r : result.rows)
      rows.push_back({{"knot", r.knot}, {"rho", r.rho}, {"tstat", r.tstat},
                      {"threshold", r.threshold}});
    doc["knots"] = std::move(rows);
  }
  return doc.dump(2);
}

void write_roc_csv(const std::vector<RocCurve>& curves, const std::string& path) {
  std::ofstream out = open_out(path);
  out << "detector,fa_rate,det_rate\n";
  out.precision(17);
  for (const RocCurve& c : curves) {
    for (const RocPoint& pt : c.points)
      out << c.detector << "," << pt.fa_rate << "," << pt.det_rate << "\n";
  }
  if (!out) throw std::runtime_error("failed writing: " + path);
}

void write_sweep_csv(const std::vector<SweepRow>& rows, const std::string& path) {
  std::ofstream out = open_out(path);
  out << "size,snr,det_rate\n";
  out.precision(17);
  for (const SweepRow& r : rows) out << r.size_param << "," << r.snr << "," << r.det_rate << "\n";
  if (!out) throw std::runtime_error("failed writing: " + path);
}

}  // namespace gfss
