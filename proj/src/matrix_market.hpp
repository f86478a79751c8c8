#pragma once

#include <string>

#include "graph.hpp"

namespace dysparse {

// Reads a MatrixMarket coordinate file (real or integer, symmetric or
// general) as a weighted undirected graph. Off-diagonal entries become
// edges with weight |value|, so Laplacian inputs (negative off-diagonals)
// and adjacency inputs load identically. Diagonal entries are ignored and
// duplicate entries coalesce by summation. 1-based indices shift to 0-based.
DynamicGraph load_matrix_market(const std::string& path);

// Writes the graph as `matrix coordinate real symmetric`, one lower-triangle
// entry per edge, sorted by (row, column), full double precision.
void save_matrix_market(const DynamicGraph& g, const std::string& path);

}  // namespace dysparse
