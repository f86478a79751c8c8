#pragma once

#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>
#include <memory>

#include "graph.hpp"

namespace dysparse {

// Graph Laplacian L = D - A as a symmetric sparse matrix: diagonal entries
// are weighted degrees, off-diagonal entries are negated edge weights.
Eigen::SparseMatrix<double> laplacian(const DynamicGraph& g);

// L with row and column `grounded` removed; positive definite when the
// graph is connected.
Eigen::SparseMatrix<double> grounded_laplacian(const DynamicGraph& g,
                                               VertexId grounded = 0);

// Applies the Laplacian pseudo-inverse of a connected graph: factorizes the
// Laplacian grounded at vertex 0 once, then maps a right-hand side to the
// zero-mean solution of L y = b. Inputs are projected to zero mean first.
class GroundedLaplacianSolver {
 public:
  explicit GroundedLaplacianSolver(const DynamicGraph& g);

  Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const;
  std::uint32_t dimension() const { return n_; }

 private:
  std::uint32_t n_;
  std::unique_ptr<Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>>> factorization_;
};

}  // namespace dysparse
