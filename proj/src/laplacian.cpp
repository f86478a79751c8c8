#include "laplacian.hpp"

#include <vector>

namespace dysparse {

Eigen::SparseMatrix<double> laplacian(const DynamicGraph& g) {
  const std::uint32_t n = g.vertex_count();
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(3 * static_cast<std::size_t>(g.edge_count()) + n);
  for (VertexId u = 0; u < n; ++u) {
    double degree_weight = 0.0;
    for (const Neighbor& nb : g.neighbors(u)) {
      triplets.emplace_back(u, nb.id, -nb.weight);
      degree_weight += nb.weight;
    }
    if (degree_weight > 0.0) {
      triplets.emplace_back(u, u, degree_weight);
    }
  }
  Eigen::SparseMatrix<double> lap(n, n);
  lap.setFromTriplets(triplets.begin(), triplets.end());
  return lap;
}

Eigen::SparseMatrix<double> grounded_laplacian(const DynamicGraph& g,
                                               VertexId grounded) {
  const std::uint32_t n = g.vertex_count();
  if (n < 2) {
    throw_usage("grounding requires at least two vertices");
  }
  auto shift = [grounded](VertexId v) -> std::int64_t {
    if (v == grounded) return -1;
    return v < grounded ? v : v - 1;
  };
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(3 * static_cast<std::size_t>(g.edge_count()));
  for (VertexId u = 0; u < n; ++u) {
    const std::int64_t row = shift(u);
    double degree_weight = 0.0;
    for (const Neighbor& nb : g.neighbors(u)) {
      degree_weight += nb.weight;
      const std::int64_t col = shift(nb.id);
      if (row >= 0 && col >= 0) {
        triplets.emplace_back(row, col, -nb.weight);
      }
    }
    if (row >= 0 && degree_weight > 0.0) {
      triplets.emplace_back(row, row, degree_weight);
    }
  }
  Eigen::SparseMatrix<double> lap(n - 1, n - 1);
  lap.setFromTriplets(triplets.begin(), triplets.end());
  return lap;
}

GroundedLaplacianSolver::GroundedLaplacianSolver(const DynamicGraph& g)
    : n_(g.vertex_count()) {
  if (!is_connected(g)) {
    throw_data("graph must be connected for pseudo-inverse solves");
  }
  factorization_ =
      std::make_unique<Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>>>();
  factorization_->compute(grounded_laplacian(g, 0));
  if (factorization_->info() != Eigen::Success) {
    throw_numeric("Laplacian factorization failed");
  }
}

Eigen::VectorXd GroundedLaplacianSolver::solve(const Eigen::VectorXd& rhs) const {
  if (rhs.size() != static_cast<Eigen::Index>(n_)) {
    throw_usage("right-hand side has wrong dimension");
  }
  Eigen::VectorXd b = rhs;
  b.array() -= b.mean();
  Eigen::VectorXd reduced = factorization_->solve(b.tail(n_ - 1));
  if (factorization_->info() != Eigen::Success) {
    throw_numeric("Laplacian solve failed");
  }
  Eigen::VectorXd full(n_);
  full[0] = 0.0;
  full.tail(n_ - 1) = reduced;
  full.array() -= full.mean();
  return full;
}

}  // namespace dysparse
