#pragma once

#include <span>
#include <vector>

#include <Eigen/Core>

#include "hdgi/assembly.hpp"

namespace hdgi {

/// Pair (u_h, u_hat_h): m coefficients per element and two trace values per
/// edge. Boundary-edge traces hold the prescribed data.
struct DiscreteSolution {
  int nodes_per_element = 0;
  Eigen::VectorXd element;
  Eigen::VectorXd trace;

  [[nodiscard]] auto element_coeffs(int k) const {
    return element.segment(k * nodes_per_element, nodes_per_element);
  }
  [[nodiscard]] double trace_value(int edge, int j) const { return trace(2 * edge + j); }
};

/// Per-element data needed to rebuild u_K from its edge traces:
/// u_K = offset - coupling * traces_K.
struct ElementRecovery {
  Eigen::MatrixXd coupling;
  Eigen::VectorXd offset;
};

struct CondensedSystem {
  SparseMatrix schur;
  Eigen::VectorXd load;
  DofMap dofs;
  std::vector<double> boundary;
  std::vector<ElementRecovery> recovery;

  [[nodiscard]] int dim() const { return static_cast<int>(load.size()); }
};

/// Eliminates element unknowns element by element. Throws SingularLocalBlock
/// naming the element whose interior block cannot be inverted, and
/// NotPositiveDefinite when a block is invertible but indefinite.
CondensedSystem condense(const Mesh& mesh, std::span<const LocalSystem> locals,
                         std::vector<double> boundary, Exec exec = Exec::parallel);

enum class SolverMethod { direct, cg };

struct SolveReport {
  Eigen::VectorXd trace;  ///< unknown traces only, DofMap trace_index order
  int iterations = 0;
  double relative_residual = 0.0;
};

/// direct: sparse Cholesky, NotPositiveDefinite on a nonpositive pivot.
/// cg: Jacobi-scaled conjugate gradients to relative residual `tol`,
/// NoConvergence after 10*dim iterations.
SolveReport solve(const CondensedSystem& system, SolverMethod method, double tol = 1e-12);

/// Jacobi-preconditioned CG on an SPD matrix. Exposed for testing.
SolveReport conjugate_gradient(const SparseMatrix& matrix, const Eigen::VectorXd& rhs, double tol,
                               int max_iterations, Exec exec = Exec::serial);

DiscreteSolution recover(const Mesh& mesh, const CondensedSystem& system,
                         const Eigen::VectorXd& trace, Exec exec = Exec::parallel);

/// Solves the full (uncondensed) symmetric system directly.
DiscreteSolution solve_monolithic(const Mesh& mesh, const GlobalSystem& system);

/// Full-system unknown vector of a discrete solution, in DofMap order.
Eigen::VectorXd to_global_vector(const Mesh& mesh, const DiscreteSolution& solution);

/// Nodal interpolant of the exact solution with interface traces chosen so
/// the scheme is consistent: the mean of both sides for PRIMARY, the
/// subdomain-2 side for ALTERNATIVE.
DiscreteSolution interpolate_exact(const Mesh& mesh, const ProblemData& data, Scheme scheme);

struct SolveResult {
  DiscreteSolution solution;
  int full_dim = 0;
  int condensed_dim = 0;
  int iterations = 0;
  double relative_residual = 0.0;
};

/// assemble -> condense -> solve -> recover.
SolveResult solve_problem(const Mesh& mesh, const ProblemData& data, const SchemeParams& params,
                          SolverMethod method = SolverMethod::direct, double tol = 1e-12,
                          Exec exec = Exec::parallel);

}  // namespace hdgi
