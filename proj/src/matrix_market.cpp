#include "matrix_market.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <unordered_map>

namespace dysparse {

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

}  // namespace

DynamicGraph load_matrix_market(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw_data("cannot open file: " + path);
  }

  std::string banner;
  if (!std::getline(in, banner)) {
    throw_data(path + ": empty file");
  }
  std::istringstream hs(banner);
  std::string magic, object, format, field, symmetry;
  hs >> magic >> object >> format >> field >> symmetry;
  if (magic != "%%MatrixMarket" || lower(object) != "matrix" ||
      lower(format) != "coordinate") {
    throw_data(path + ": not a MatrixMarket coordinate file");
  }
  field = lower(field);
  symmetry = lower(symmetry);
  if (field != "real" && field != "integer") {
    throw_data(path + ": unsupported field type '" + field + "'");
  }
  if (symmetry != "symmetric" && symmetry != "general") {
    throw_data(path + ": unsupported symmetry '" + symmetry + "'");
  }

  std::string line;
  long long rows = 0, cols = 0, nnz = 0;
  bool have_sizes = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '%') continue;
    std::istringstream ls(line);
    if (!(ls >> rows >> cols >> nnz)) {
      throw_data(path + ": malformed size line");
    }
    have_sizes = true;
    break;
  }
  if (!have_sizes || rows <= 0 || cols <= 0 || nnz < 0) {
    throw_data(path + ": missing or invalid size line");
  }
  const std::uint64_t n = static_cast<std::uint64_t>(std::max(rows, cols));

  // Coalesce duplicates (and general-format mirror entries) by summation of
  // absolute values before building the graph.
  std::unordered_map<std::uint64_t, double> coalesced;
  coalesced.reserve(static_cast<std::size_t>(nnz));
  long long seen = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '%') continue;
    std::istringstream ls(line);
    long long i = 0, j = 0;
    double value = 0.0;
    if (!(ls >> i >> j >> value)) {
      throw_data(path + ": malformed entry at nonzero " + std::to_string(seen + 1));
    }
    ++seen;
    if (i < 1 || j < 1 || i > rows || j > cols) {
      std::ostringstream os;
      os << path << ": index (" << i << ", " << j << ") out of header range";
      throw_data(os.str());
    }
    if (i == j) continue;  // diagonal carries no edge
    std::uint64_t u = static_cast<std::uint64_t>(std::min(i, j)) - 1;
    std::uint64_t v = static_cast<std::uint64_t>(std::max(i, j)) - 1;
    coalesced[u * n + v] += std::abs(value);
  }
  if (seen != nnz) {
    std::ostringstream os;
    os << path << ": header promises " << nnz << " entries, found " << seen;
    throw_data(os.str());
  }

  DynamicGraph g(static_cast<std::uint32_t>(n));
  for (const auto& [key, weight] : coalesced) {
    const VertexId u = static_cast<VertexId>(key / n);
    const VertexId v = static_cast<VertexId>(key % n);
    if (!(weight > 0.0)) {
      std::ostringstream os;
      os << path << ": edge (" << u + 1 << ", " << v + 1
         << ") has zero coalesced weight";
      throw_data(os.str());
    }
    g.insert_edge(u, v, weight);
  }
  return g;
}

void save_matrix_market(const DynamicGraph& g, const std::string& path) {
  std::ofstream out(path);
  if (!out) {
    throw_data("cannot write file: " + path);
  }
  auto edges = g.edges();
  std::sort(edges.begin(), edges.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  out << "%%MatrixMarket matrix coordinate real symmetric\n";
  out << g.vertex_count() << ' ' << g.vertex_count() << ' ' << edges.size() << '\n';
  char buffer[64];
  for (const auto& [pair, weight] : edges) {
    // Lower triangle: row > column.
    std::snprintf(buffer, sizeof(buffer), "%.17g", weight);
    out << pair.second + 1 << ' ' << pair.first + 1 << ' ' << buffer << '\n';
  }
  if (!out) {
    throw_data("write failed: " + path);
  }
}

}  // namespace dysparse
