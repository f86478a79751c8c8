#pragma once

#include <Eigen/SparseCore>
#include <cstdint>
#include <memory>
#include <vector>

#include "graph.hpp"
#include "laplacian.hpp"

namespace dysparse {

// y = L_H^+ b on the zero-mean subspace. Inputs are projected to zero mean.
// Backed by an exact sparse factorization up to `factor_cap` vertices, and
// by an inner CG solve (relative tolerance 1e-10) beyond it.
class Preconditioner {
 public:
  static constexpr std::uint32_t kDefaultFactorCap = 2000000;

  static Preconditioner from_graph(const DynamicGraph& h,
                                   std::uint32_t factor_cap = kDefaultFactorCap);
  static Preconditioner identity(std::uint32_t n);

  Eigen::VectorXd apply(const Eigen::VectorXd& b) const;
  std::uint32_t dimension() const { return n_; }

 private:
  Preconditioner() = default;

  enum class Mode { Identity, Factorized, InnerCg };
  Mode mode_ = Mode::Identity;
  std::uint32_t n_ = 0;
  std::shared_ptr<GroundedLaplacianSolver> factorization_;
  Eigen::SparseMatrix<double> lh_;  // InnerCg only
};

struct PcgResult {
  Eigen::VectorXd solution;         // zero mean
  std::uint32_t iterations = 0;
  double relative_residual = 0.0;   // recomputed from scratch, not the recurrence
  bool converged = false;
};

// Preconditioned conjugate gradient for L_G x = b with rhs and iterates
// pinned to zero mean. Stops when the recomputed relative residual drops
// below `tolerance`. energy_trace, when given, records the quadratic
// functional 0.5 x'Ax - b'x per iteration (monotone non-increasing).
PcgResult pcg_solve(const Eigen::SparseMatrix<double>& lg, const Eigen::VectorXd& rhs,
                    const Preconditioner& preconditioner, double tolerance = 1e-8,
                    std::uint32_t max_iterations = 0,
                    std::vector<double>* energy_trace = nullptr);

// Seeded standard-normal right-hand side, projected to zero mean.
Eigen::VectorXd random_rhs(std::uint32_t n, std::uint64_t seed);

}  // namespace dysparse
