#include "spectral.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "rng.hpp"

namespace dysparse {

namespace {

void check_dense_cap(std::uint32_t n, std::uint32_t cap) {
  if (n > cap) {
    std::ostringstream os;
    os << "dense spectral path refused: n = " << n << " exceeds cap " << cap;
    throw_usage(os.str());
  }
}

}  // namespace

DenseSpectrum dense_spectrum(const DynamicGraph& g, std::uint32_t dense_cap) {
  check_dense_cap(g.vertex_count(), dense_cap);
  Eigen::MatrixXd dense = Eigen::MatrixXd(laplacian(g));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(dense);
  if (solver.info() != Eigen::Success) {
    throw_numeric("eigendecomposition failed");
  }
  return {solver.eigenvalues(), solver.eigenvectors()};
}

ResistanceOracle::ResistanceOracle(const DynamicGraph& g, std::uint32_t dense_cap) {
  check_dense_cap(g.vertex_count(), dense_cap);
  component_ = connected_components(g);
  Eigen::MatrixXd dense = Eigen::MatrixXd(laplacian(g));
  pseudo_inverse_ = dense.completeOrthogonalDecomposition().pseudoInverse();
}

double ResistanceOracle::resistance(VertexId p, VertexId q) const {
  const std::uint32_t n = static_cast<std::uint32_t>(pseudo_inverse_.rows());
  if (p >= n || q >= n || p == q) {
    throw_usage("resistance query needs two distinct in-range vertices");
  }
  if (component_[p] != component_[q]) {
    throw_data("vertices are in different components (infinite resistance)");
  }
  return pseudo_inverse_(p, p) - 2.0 * pseudo_inverse_(p, q) + pseudo_inverse_(q, q);
}

double effective_resistance_exact(const DynamicGraph& g, VertexId p, VertexId q,
                                  std::uint32_t dense_cap) {
  return ResistanceOracle(g, dense_cap).resistance(p, q);
}

double effective_resistance_eigensum(const DenseSpectrum& spectrum, VertexId p,
                                     VertexId q) {
  const Eigen::Index n = spectrum.eigenvalues.size();
  if (p >= n || q >= n || p == q) {
    throw_usage("resistance query needs two distinct in-range vertices");
  }
  const double lambda_top = spectrum.eigenvalues[n - 1];
  const double null_threshold = std::max(1e-12, 1e-12 * lambda_top);
  double sum = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double lambda = spectrum.eigenvalues[i];
    if (lambda <= null_threshold) continue;
    const double projection =
        spectrum.eigenvectors(p, i) - spectrum.eigenvectors(q, i);
    sum += projection * projection / lambda;
  }
  return sum;
}

Eigen::VectorXd eigen_perturbation(const DenseSpectrum& spectrum, VertexId p,
                                   VertexId q, double weight) {
  const Eigen::Index n = spectrum.eigenvalues.size();
  if (p >= n || q >= n || p == q) {
    throw_usage("perturbation query needs two distinct in-range vertices");
  }
  Eigen::VectorXd deltas(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double projection =
        spectrum.eigenvectors(p, i) - spectrum.eigenvectors(q, i);
    deltas[i] = weight * projection * projection;
  }
  return deltas;
}

Eigen::MatrixXd weighted_eigenbasis(const DenseSpectrum& spectrum, std::uint32_t k) {
  const Eigen::Index n = spectrum.eigenvalues.size();
  if (k < 2 || static_cast<Eigen::Index>(k) > n) {
    throw_usage("eigenbasis order must lie in [2, n]");
  }
  Eigen::MatrixXd basis(n, k - 1);
  for (std::uint32_t i = 2; i <= k; ++i) {
    const double lambda = spectrum.eigenvalues[i - 1];
    if (!(lambda > 0.0)) {
      throw_numeric("eigenbasis hit a non-positive eigenvalue (disconnected graph?)");
    }
    basis.col(i - 2) = spectrum.eigenvectors.col(i - 1) / std::sqrt(lambda);
  }
  return basis;
}

namespace {

ConditionEstimate condition_number_dense(const DynamicGraph& g,
                                         const DynamicGraph& h) {
  const std::uint32_t n = g.vertex_count();
  Eigen::MatrixXd lg = Eigen::MatrixXd(laplacian(g));
  Eigen::MatrixXd lh = Eigen::MatrixXd(laplacian(h));
  // Orthonormal basis of the complement of the constant vector.
  Eigen::MatrixXd ones = Eigen::MatrixXd::Ones(n, 1);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(ones);
  Eigen::MatrixXd full = qr.householderQ();
  Eigen::MatrixXd basis = full.rightCols(n - 1);
  Eigen::MatrixXd a = basis.transpose() * lg * basis;
  Eigen::MatrixXd b = basis.transpose() * lh * basis;
  a = 0.5 * (a + a.transpose()).eval();
  b = 0.5 * (b + b.transpose()).eval();
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> solver(a, b);
  if (solver.info() != Eigen::Success) {
    throw_numeric("generalized eigensolve failed");
  }
  ConditionEstimate estimate;
  estimate.method = ConditionEstimate::Method::Dense;
  estimate.lambda_min = solver.eigenvalues().minCoeff();
  estimate.lambda_max = solver.eigenvalues().maxCoeff();
  estimate.kappa = estimate.lambda_max / estimate.lambda_min;
  estimate.iterations_used = 0;
  estimate.converged = true;
  return estimate;
}

// Ritz values of the symmetric tridiagonal built from Lanczos coefficients.
std::pair<double, double> tridiagonal_extremes(const std::vector<double>& alphas,
                                               const std::vector<double>& betas) {
  const Eigen::Index m = static_cast<Eigen::Index>(alphas.size());
  Eigen::VectorXd diag(m);
  Eigen::VectorXd sub(std::max<Eigen::Index>(m - 1, 0));
  for (Eigen::Index i = 0; i < m; ++i) diag[i] = alphas[i];
  for (Eigen::Index i = 0; i + 1 < m; ++i) sub[i] = betas[i];
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
  return {solver.eigenvalues()[0], solver.eigenvalues()[m - 1]};
}

ConditionEstimate condition_number_iterative(const DynamicGraph& g,
                                             const DynamicGraph& h,
                                             const ConditionOptions& options) {
  const std::uint32_t n = g.vertex_count();
  const Eigen::SparseMatrix<double> lg = laplacian(g);
  const Eigen::SparseMatrix<double> lh = laplacian(h);
  GroundedLaplacianSolver hsolver(h);

  // Lanczos for the pencil (L_G, L_H) in the L_H inner product. Every basis
  // vector is zero-mean, which deflates the shared null space.
  SplitMix64 rng(hash_mix(options.seed));
  Eigen::VectorXd q(n);
  for (std::uint32_t i = 0; i < n; ++i) q[i] = rng.next_double() - 0.5;
  q.array() -= q.mean();

  std::vector<Eigen::VectorXd> basis;       // q_0 .. q_j
  std::vector<Eigen::VectorXd> basis_b;     // L_H q_i, cached for reorthogonalization
  std::vector<double> alphas, betas;

  Eigen::VectorXd bq = lh * q;
  const double norm0 = std::sqrt(q.dot(bq));
  if (!(norm0 > 0.0)) {
    throw_numeric("degenerate Lanczos start vector");
  }
  q /= norm0;
  bq /= norm0;
  basis.push_back(q);
  basis_b.push_back(bq);

  ConditionEstimate estimate;
  estimate.method = ConditionEstimate::Method::Iterative;
  estimate.converged = false;

  const std::uint32_t iteration_limit =
      std::min<std::uint32_t>(options.max_iterations, n - 1);
  double previous_min = 0.0, previous_max = 0.0;
  std::uint32_t stable_rounds = 0;

  for (std::uint32_t j = 0; j < iteration_limit; ++j) {
    const Eigen::VectorXd aq = lg * basis[j];
    Eigen::VectorXd w = hsolver.solve(aq);
    const double alpha = basis[j].dot(aq);
    alphas.push_back(alpha);
    w -= alpha * basis[j];
    if (j > 0) w -= betas[j - 1] * basis[j - 1];
    // Full reorthogonalization (two classical Gram-Schmidt passes) in the
    // L_H inner product.
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t i = 0; i < basis.size(); ++i) {
        w -= basis_b[i].dot(w) * basis[i];
      }
    }
    w.array() -= w.mean();
    Eigen::VectorXd bw = lh * w;
    const double beta = std::sqrt(std::max(w.dot(bw), 0.0));

    const auto [theta_min, theta_max] = tridiagonal_extremes(alphas, betas);
    estimate.lambda_min = theta_min;
    estimate.lambda_max = theta_max;
    estimate.iterations_used = j + 1;

    if (beta < 1e-13 * std::max(1.0, std::abs(alpha))) {
      // Invariant subspace: the Krylov space is exhausted and the extremes
      // are exact on the explored subspace.
      estimate.converged = true;
      break;
    }
    if (j > 2) {
      const double change_min =
          std::abs(theta_min - previous_min) / std::max(std::abs(theta_min), 1e-300);
      const double change_max =
          std::abs(theta_max - previous_max) / std::max(std::abs(theta_max), 1e-300);
      if (change_min < options.tolerance && change_max < options.tolerance) {
        if (++stable_rounds >= 3) {
          estimate.converged = true;
          break;
        }
      } else {
        stable_rounds = 0;
      }
    }
    previous_min = theta_min;
    previous_max = theta_max;

    betas.push_back(beta);
    basis.push_back(w / beta);
    basis_b.push_back(bw / beta);
  }

  if (alphas.empty()) {
    throw_numeric("Lanczos made no progress");
  }
  if (!(estimate.lambda_min > 0.0)) {
    throw_numeric("iterative pencil estimate hit a non-positive eigenvalue");
  }
  estimate.kappa = estimate.lambda_max / estimate.lambda_min;
  return estimate;
}

}  // namespace

ConditionEstimate condition_number(const DynamicGraph& g, const DynamicGraph& h,
                                   const ConditionOptions& options) {
  if (g.vertex_count() != h.vertex_count()) {
    throw_usage("graphs must share a vertex set");
  }
  if (g.vertex_count() < 2) {
    throw_usage("condition number needs at least two vertices");
  }
  if (!is_connected(g)) {
    throw_data("graph is disconnected");
  }
  if (!is_connected(h)) {
    throw_data("sparsifier is disconnected");
  }
  ConditionOptions::Method method = options.method;
  if (method == ConditionOptions::Method::Auto) {
    method = g.vertex_count() <= options.dense_cap ? ConditionOptions::Method::Dense
                                                   : ConditionOptions::Method::Iterative;
  }
  if (method == ConditionOptions::Method::Dense) {
    check_dense_cap(g.vertex_count(), options.dense_cap);
    return condition_number_dense(g, h);
  }
  return condition_number_iterative(g, h, options);
}

double commute_time_estimate(const DynamicGraph& g, VertexId p, VertexId q,
                             std::uint64_t trials, std::uint64_t seed) {
  if (p == q || p >= g.vertex_count() || q >= g.vertex_count()) {
    throw_usage("commute time needs two distinct in-range vertices");
  }
  if (trials == 0) {
    throw_usage("at least one trial required");
  }
  const auto component = connected_components(g);
  if (component[p] != component[q]) {
    throw_data("vertices are in different components");
  }
  SplitMix64 rng(hash_mix(seed + 0xC0117EC7ull));
  auto hit_steps = [&](VertexId from, VertexId to) {
    std::uint64_t steps = 0;
    VertexId current = from;
    while (current != to) {
      const auto nbs = g.neighbors(current);
      double total = 0.0;
      for (const Neighbor& nb : nbs) total += nb.weight;
      const double target = rng.next_double() * total;
      double cumulative = 0.0;
      VertexId next = nbs.back().id;
      for (const Neighbor& nb : nbs) {
        cumulative += nb.weight;
        if (target < cumulative) {
          next = nb.id;
          break;
        }
      }
      current = next;
      ++steps;
    }
    return steps;
  };
  std::uint64_t total_steps = 0;
  for (std::uint64_t t = 0; t < trials; ++t) {
    total_steps += hit_steps(p, q);
    total_steps += hit_steps(q, p);
  }
  return static_cast<double>(total_steps) / static_cast<double>(trials);
}

}  // namespace dysparse
