#include "solver.hpp"

#include <cassert>
#include <cmath>

#include "rng.hpp"

namespace dysparse {

Preconditioner Preconditioner::from_graph(const DynamicGraph& h,
                                          std::uint32_t factor_cap) {
  Preconditioner m;
  m.n_ = h.vertex_count();
  if (!is_connected(h)) {
    throw_data("preconditioner graph is disconnected");
  }
  if (h.vertex_count() <= factor_cap) {
    m.mode_ = Mode::Factorized;
    m.factorization_ = std::make_shared<GroundedLaplacianSolver>(h);
  } else {
    m.mode_ = Mode::InnerCg;
    m.lh_ = laplacian(h);
  }
  return m;
}

Preconditioner Preconditioner::identity(std::uint32_t n) {
  Preconditioner m;
  m.mode_ = Mode::Identity;
  m.n_ = n;
  return m;
}

Eigen::VectorXd Preconditioner::apply(const Eigen::VectorXd& b) const {
  if (b.size() != static_cast<Eigen::Index>(n_)) {
    throw_usage("preconditioner input has wrong dimension");
  }
  Eigen::VectorXd rhs = b;
  rhs.array() -= rhs.mean();
  switch (mode_) {
    case Mode::Identity:
      return rhs;
    case Mode::Factorized:
      return factorization_->solve(rhs);
    case Mode::InnerCg: {
      // Plain CG on L_H restricted to the zero-mean subspace.
      Eigen::VectorXd x = Eigen::VectorXd::Zero(n_);
      Eigen::VectorXd r = rhs;
      Eigen::VectorXd p = r;
      double rho = r.squaredNorm();
      const double target = 1e-20 * rhs.squaredNorm();  // (1e-10 relative)^2
      const std::uint32_t limit = 20 * n_;
      for (std::uint32_t k = 0; k < limit && rho > target; ++k) {
        Eigen::VectorXd q = lh_ * p;
        const double alpha = rho / p.dot(q);
        x += alpha * p;
        r -= alpha * q;
        const double rho_next = r.squaredNorm();
        p = r + (rho_next / rho) * p;
        rho = rho_next;
      }
      x.array() -= x.mean();
      return x;
    }
  }
  return rhs;
}

PcgResult pcg_solve(const Eigen::SparseMatrix<double>& lg, const Eigen::VectorXd& rhs,
                    const Preconditioner& preconditioner, double tolerance,
                    std::uint32_t max_iterations, std::vector<double>* energy_trace) {
  const std::uint32_t n = static_cast<std::uint32_t>(lg.rows());
  if (rhs.size() != static_cast<Eigen::Index>(n) || preconditioner.dimension() != n) {
    throw_usage("solver dimensions disagree");
  }
  if (max_iterations == 0) {
    max_iterations = 10 * n + 100;
  }
  Eigen::VectorXd b = rhs;
  b.array() -= b.mean();
  const double b_norm = b.norm();

  PcgResult result;
  result.solution = Eigen::VectorXd::Zero(n);
  if (b_norm == 0.0) {
    result.converged = true;
    return result;
  }

  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd r = b;
  Eigen::VectorXd z = preconditioner.apply(r);
  Eigen::VectorXd p = z;
  double rho = r.dot(z);
  double previous_energy = 0.0;  // energy of x = 0

  for (std::uint32_t k = 1; k <= max_iterations; ++k) {
    const Eigen::VectorXd q = lg * p;
    const double pq = p.dot(q);
    if (!(pq > 0.0)) {
      throw_numeric("PCG breakdown: search direction lost positivity");
    }
    const double alpha = rho / pq;
    x += alpha * p;
    x.array() -= x.mean();
    r -= alpha * q;
    result.iterations = k;

#ifdef NDEBUG
    const bool track_energy = energy_trace != nullptr;
#else
    const bool track_energy = true;
#endif
    if (track_energy) {
      const double energy = 0.5 * x.dot(lg * x) - b.dot(x);
      assert(energy <= previous_energy + 1e-10 * std::abs(previous_energy) + 1e-300);
      if (energy_trace != nullptr) energy_trace->push_back(energy);
      previous_energy = energy;
    }

    if (r.norm() <= tolerance * b_norm) {
      // Trust nothing: recompute the residual from scratch before stopping.
      const Eigen::VectorXd true_residual = b - lg * x;
      if (true_residual.norm() <= tolerance * b_norm) {
        break;
      }
      r = true_residual;
      z = preconditioner.apply(r);
      p = z;
      rho = r.dot(z);
      continue;
    }

    z = preconditioner.apply(r);
    const double rho_next = r.dot(z);
    p = z + (rho_next / rho) * p;
    rho = rho_next;
  }

  result.solution = x;
  result.relative_residual = (b - lg * x).norm() / b_norm;
  result.converged = result.relative_residual <= tolerance;
  return result;
}

Eigen::VectorXd random_rhs(std::uint32_t n, std::uint64_t seed) {
  SplitMix64 rng(hash_mix(seed + 0xB0C4ull));
  Eigen::VectorXd b(n);
  // Box-Muller on the deterministic stream.
  for (std::uint32_t i = 0; i < n; i += 2) {
    const double u1 = std::max(rng.next_double(), 1e-300);
    const double u2 = rng.next_double();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    b[i] = radius * std::cos(2.0 * M_PI * u2);
    if (i + 1 < n) b[i + 1] = radius * std::sin(2.0 * M_PI * u2);
  }
  b.array() -= b.mean();
  return b;
}

}  // namespace dysparse
