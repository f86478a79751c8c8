#pragma once

#include "graph.hpp"

namespace dysparse::testing {

// 26-vertex fixture for the worked update scenarios: a sparsifier spine
// 25-20-21-22-17 plus two long chains closing one large cycle, and three
// graph-only edges (24,25), (16,21), (3,7). All weights are 1, so with a
// distortion budget of 4 a walker explores exactly four hops.
//
// Distances in H from vertex 25: vertex 17 sits 4 hops away (prunable),
// vertex 9 sits 12 hops away (unreachable, kept). Deleting (16,17) makes
// 16-21-22-17 the cheapest recovery path in G, of which only (16,21) is
// missing from H; deleting (24,25) touches no sparsifier edge.
struct CaseStudy {
  DynamicGraph graph;       // G(0)
  DynamicGraph sparsifier;  // H(0)

  CaseStudy() : graph(26), sparsifier(26) {
    const std::pair<VertexId, VertexId> h_edges[] = {
        {25, 20}, {20, 21}, {21, 22}, {22, 17},                      // spine
        {17, 16},                                                    // deleted in (b)
        {16, 15}, {15, 14}, {14, 13}, {13, 12}, {12, 11}, {11, 10},  // chain to 9
        {10, 9},
        {22, 23}, {23, 24},                                          // side arm
        {17, 18}, {18, 19}, {19, 0},                                 // link to ring
        {0, 1},   {1, 2},   {2, 3},  {3, 4},  {4, 5},  {5, 6},       // chain to 9
        {6, 7},   {7, 8},   {8, 9},
    };
    for (const auto& [u, v] : h_edges) {
      sparsifier.insert_edge(u, v, 1.0);
      graph.insert_edge(u, v, 1.0);
    }
    const std::pair<VertexId, VertexId> g_only[] = {{24, 25}, {16, 21}, {3, 7}};
    for (const auto& [u, v] : g_only) {
      graph.insert_edge(u, v, 1.0);
    }
  }
};

}  // namespace dysparse::testing
