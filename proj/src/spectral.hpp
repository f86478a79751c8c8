#pragma once

#include <Eigen/Dense>
#include <cstdint>

#include "graph.hpp"
#include "laplacian.hpp"

namespace dysparse {

// All dense ground-truth machinery is capped to keep O(n^3) work desk-scale.
inline constexpr std::uint32_t kDefaultDenseCap = 5000;

struct DenseSpectrum {
  Eigen::VectorXd eigenvalues;   // ascending
  Eigen::MatrixXd eigenvectors;  // column i pairs with eigenvalues[i]
};

DenseSpectrum dense_spectrum(const DynamicGraph& g,
                             std::uint32_t dense_cap = kDefaultDenseCap);

// Exact effective resistances from the dense pseudo-inverse; factorizes once
// for any number of queries. Distinct route from the eigen-sum form below.
class ResistanceOracle {
 public:
  explicit ResistanceOracle(const DynamicGraph& g,
                            std::uint32_t dense_cap = kDefaultDenseCap);

  // b_pq^T L^+ b_pq. Errors when p and q sit in different components.
  double resistance(VertexId p, VertexId q) const;

 private:
  Eigen::MatrixXd pseudo_inverse_;
  std::vector<std::uint32_t> component_;
};

double effective_resistance_exact(const DynamicGraph& g, VertexId p, VertexId q,
                                  std::uint32_t dense_cap = kDefaultDenseCap);

// Same quantity through the eigenpair sum over i >= 2 of (u_i^T b_pq)^2 / lambda_i.
double effective_resistance_eigensum(const DenseSpectrum& spectrum, VertexId p,
                                     VertexId q);

inline double spectral_distortion(double w_pq, double resistance) {
  return w_pq * resistance;
}

// First-order eigenvalue shifts of adding edge (p, q, weight):
// delta_i = weight * (u_i^T b_pq)^2.
Eigen::VectorXd eigen_perturbation(const DenseSpectrum& spectrum, VertexId p,
                                   VertexId q, double weight);

// Columns u_i / sqrt(lambda_i) for i = 2..k (1-based eigenvalue indexing).
Eigen::MatrixXd weighted_eigenbasis(const DenseSpectrum& spectrum, std::uint32_t k);

struct ConditionEstimate {
  double kappa = 1.0;
  double lambda_max = 1.0;
  double lambda_min = 1.0;
  enum class Method { Dense, Iterative } method = Method::Dense;
  std::uint32_t iterations_used = 0;
  bool converged = true;
};

struct ConditionOptions {
  enum class Method { Auto, Dense, Iterative };
  Method method = Method::Auto;
  double tolerance = 1e-6;          // iterative Ritz-value tolerance
  std::uint32_t max_iterations = 400;
  std::uint32_t dense_cap = kDefaultDenseCap;
  std::uint64_t seed = 0x5eed;      // Lanczos start vector
};

// Extreme generalized eigenvalues of the pencil (L_G, L_H) restricted to the
// complement of the constant vector, and their ratio kappa. The dense path
// projects onto that complement and solves the full pencil; the iterative
// path runs Lanczos in the L_H inner product, deflating the constant vector
// by keeping every vector zero-mean (L_H solves ground vertex 0 and
// re-center, which acts as L_H^+ on that subspace).
ConditionEstimate condition_number(const DynamicGraph& g, const DynamicGraph& h,
                                   const ConditionOptions& options = {});

// Monte Carlo mean round-trip steps p -> q -> p of the standard weighted
// random walk (backtracking allowed).
double commute_time_estimate(const DynamicGraph& g, VertexId p, VertexId q,
                             std::uint64_t trials, std::uint64_t seed);

}  // namespace dysparse
