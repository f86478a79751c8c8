#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "error.hpp"

namespace dysparse {

using VertexId = std::uint32_t;

struct Neighbor {
  VertexId id;
  double weight;
};

// Mutable weighted undirected graph held as per-vertex adjacency arrays.
// Every edge appears in both endpoint arrays with the same weight; arrays
// grow by capacity doubling, deletions swap with the last entry, so the
// order of a vertex's neighbors is not part of the contract.
class DynamicGraph {
 public:
  enum class InsertOutcome { New, Coalesced };

  explicit DynamicGraph(std::uint32_t vertex_count);

  std::uint32_t vertex_count() const {
    return static_cast<std::uint32_t>(adjacency_.size());
  }
  std::uint64_t edge_count() const { return edge_count_; }
  double total_weight() const { return total_weight_; }

  std::uint32_t degree(VertexId u) const;

  // View into the adjacency array; stable until the next mutation.
  std::span<const Neighbor> neighbors(VertexId u) const;

  bool has_edge(VertexId u, VertexId v) const;

  // 0.0 when the edge is absent (weights are strictly positive).
  double edge_weight(VertexId u, VertexId v) const;

  // Inserting an existing edge coalesces by weight summation.
  InsertOutcome insert_edge(VertexId u, VertexId v, double weight);

  // Returns the removed weight; data error if the edge is absent.
  double delete_edge(VertexId u, VertexId v);

  // Off-tree density |E|/|V| - 1.
  double density() const;

  // Every edge of the graph, u < v, in vertex order. O(n + m).
  std::vector<std::pair<std::pair<VertexId, VertexId>, double>> edges() const;

  // Full-scan symmetry and counter check; test support.
  bool check_consistency(std::string* why = nullptr) const;

 private:
  void check_vertex(VertexId u) const;
  Neighbor* find(VertexId u, VertexId v);
  const Neighbor* find(VertexId u, VertexId v) const;

  std::vector<std::vector<Neighbor>> adjacency_;
  std::uint64_t edge_count_ = 0;
  double total_weight_ = 0.0;
};

// Component label per vertex (labels are 0-based, assigned in BFS discovery
// order from vertex 0 upward). component_count may be null.
std::vector<std::uint32_t> connected_components(const DynamicGraph& g,
                                                std::uint32_t* component_count = nullptr);

bool is_connected(const DynamicGraph& g);

}  // namespace dysparse
