#pragma once

#include <cstdint>

#include "graph.hpp"
#include "rng.hpp"

namespace dysparse::testing {

inline DynamicGraph make_path(std::uint32_t n, double weight = 1.0) {
  DynamicGraph g(n);
  for (VertexId v = 0; v + 1 < n; ++v) g.insert_edge(v, v + 1, weight);
  return g;
}

inline DynamicGraph make_cycle(std::uint32_t n, double weight = 1.0) {
  DynamicGraph g = make_path(n, weight);
  g.insert_edge(n - 1, 0, weight);
  return g;
}

inline DynamicGraph make_star(std::uint32_t leaves, double weight = 1.0) {
  DynamicGraph g(leaves + 1);
  for (VertexId v = 1; v <= leaves; ++v) g.insert_edge(0, v, weight);
  return g;
}

inline DynamicGraph make_triangle(double weight = 1.0) {
  return make_cycle(3, weight);
}

// Random connected graph: a random attachment tree plus `extra_edges`
// uniformly sampled non-edges, weights uniform in [w_min, w_max]. When
// with_pendant is set, the last vertex keeps exactly one incident edge, so
// any spanning-tree-based sparsifier preserves it and the pencil's smallest
// eigenvalue is pinned at 1.
inline DynamicGraph make_random_connected(std::uint32_t n, std::uint32_t extra_edges,
                                          std::uint64_t seed, double w_min = 0.1,
                                          double w_max = 10.0,
                                          bool with_pendant = false) {
  DynamicGraph g(n);
  SplitMix64 rng(hash_mix(seed + 0x57A77ull));
  auto weight = [&] { return w_min + rng.next_double() * (w_max - w_min); };
  const std::uint32_t core = with_pendant ? n - 1 : n;
  for (VertexId v = 1; v < core; ++v) {
    g.insert_edge(v, static_cast<VertexId>(rng.next_below(v)), weight());
  }
  std::uint32_t added = 0, attempts = 0;
  while (added < extra_edges && attempts < 100 * extra_edges + 100) {
    ++attempts;
    const VertexId u = static_cast<VertexId>(rng.next_below(core));
    const VertexId v = static_cast<VertexId>(rng.next_below(core));
    if (u == v || g.has_edge(u, v)) continue;
    g.insert_edge(u, v, weight());
    ++added;
  }
  if (with_pendant) {
    g.insert_edge(n - 1, static_cast<VertexId>(rng.next_below(core)), weight());
  }
  return g;
}

// Triangulated grid: rows x cols lattice with one random diagonal per cell.
// Mesh-like (m/n around 3), the shape of the finite-element benchmarks.
inline DynamicGraph make_mesh(std::uint32_t rows, std::uint32_t cols,
                              std::uint64_t seed, double w_min = 0.5,
                              double w_max = 2.0) {
  DynamicGraph g(rows * cols);
  SplitMix64 rng(hash_mix(seed + 0x3E5Bull));
  auto weight = [&] { return w_min + rng.next_double() * (w_max - w_min); };
  auto id = [cols](std::uint32_t r, std::uint32_t c) { return r * cols + c; };
  for (std::uint32_t r = 0; r < rows; ++r) {
    for (std::uint32_t c = 0; c < cols; ++c) {
      if (c + 1 < cols) g.insert_edge(id(r, c), id(r, c + 1), weight());
      if (r + 1 < rows) g.insert_edge(id(r, c), id(r + 1, c), weight());
      if (r + 1 < rows && c + 1 < cols) {
        if (rng.next() & 1u) {
          g.insert_edge(id(r, c), id(r + 1, c + 1), weight());
        } else {
          g.insert_edge(id(r, c + 1), id(r + 1, c), weight());
        }
      }
    }
  }
  return g;
}

}  // namespace dysparse::testing
