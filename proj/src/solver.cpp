#include "hdgi/solver.hpp"

#include <cmath>

#include <Eigen/Cholesky>
#include <Eigen/LU>
#include <Eigen/SparseCholesky>

#include "hdgi/error.hpp"

namespace hdgi {

namespace {

struct LocalSchur {
  Eigen::MatrixXd matrix;
  Eigen::VectorXd load;
  ElementRecovery recovery;
};

// A coercive form has SPD interior blocks, so an indefinite block means the
// penalty is below the coercivity threshold.
LocalSchur eliminate(int element, const LocalSystem& ls) {
  const Eigen::MatrixXd auu = ls.uu();
  if (!Eigen::FullPivLU<Eigen::MatrixXd>(auu).isInvertible())
    throw Error(ErrorCode::singular_local_block,
                "interior block of element " + std::to_string(element) + " is singular");
  Eigen::LLT<Eigen::MatrixXd> llt(auu);
  if (llt.info() != Eigen::Success)
    throw Error(ErrorCode::not_positive_definite,
                "interior block of element " + std::to_string(element) + " is not positive definite");
  LocalSchur out;
  out.recovery.coupling = llt.solve(Eigen::MatrixXd(ls.ut()));
  out.recovery.offset = llt.solve(Eigen::VectorXd(ls.bu()));
  Eigen::MatrixXd s = ls.tt() - ls.tu() * out.recovery.coupling;
  out.matrix = 0.5 * (s + s.transpose());
  out.load = ls.bt() - ls.tu() * out.recovery.offset;
  return out;
}

// Column-major storage of a symmetric matrix: column j yields row j.
void symmetric_matvec(const SparseMatrix& a, const Eigen::VectorXd& x, Eigen::VectorXd& y, Exec exec) {
  y.resize(a.rows());
  for_each_index(exec, static_cast<std::size_t>(a.outerSize()), [&](std::size_t j) {
    double sum = 0.0;
    for (SparseMatrix::InnerIterator it(a, static_cast<Eigen::Index>(j)); it; ++it)
      sum += it.value() * x(it.index());
    y(static_cast<Eigen::Index>(j)) = sum;
  });
}

std::vector<double> gather_prescribed(const Mesh& mesh, int element, const std::vector<double>& boundary) {
  const auto& el = mesh.elements[element];
  std::vector<double> out(2 * el.num_vertices);
  for (int i = 0; i < el.num_vertices; ++i)
    for (int j = 0; j < 2; ++j) out[2 * i + j] = boundary[2 * el.edges[i] + j];
  return out;
}

}  // namespace

CondensedSystem condense(const Mesh& mesh, std::span<const LocalSystem> locals,
                         std::vector<double> boundary, Exec exec) {
  DofMap dofs(mesh);
  std::vector<LocalSchur> parts(locals.size());
  for_each_index(exec, locals.size(), [&](std::size_t k) {
    parts[k] = eliminate(static_cast<int>(k), locals[k]);
  });

  const int n = dofs.num_trace_dofs();
  CondensedSystem sys{SparseMatrix(n, n), Eigen::VectorXd::Zero(n), dofs, std::move(boundary), {}};
  sys.recovery.reserve(parts.size());

  std::vector<Eigen::Triplet<double>> triplets;
  const int m = dofs.nodes_per_element();
  triplets.reserve(parts.size() * 4 * m * m);
  std::vector<int> global(2 * m);
  for (std::size_t k = 0; k < parts.size(); ++k) {
    const auto& el = mesh.elements[k];
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < 2; ++j) global[2 * i + j] = dofs.trace_index(el.edges[i], j);
    const auto prescribed = gather_prescribed(mesh, static_cast<int>(k), sys.boundary);
    const auto& part = parts[k];
    for (int r = 0; r < 2 * m; ++r) {
      if (global[r] < 0) continue;
      sys.load(global[r]) += part.load(r);
      for (int c = 0; c < 2 * m; ++c) {
        if (global[c] < 0)
          sys.load(global[r]) -= part.matrix(r, c) * prescribed[c];
        else
          triplets.emplace_back(global[r], global[c], part.matrix(r, c));
      }
    }
    sys.recovery.push_back(std::move(parts[k].recovery));
  }
  sys.schur.setFromTriplets(triplets.begin(), triplets.end());
  return sys;
}

SolveReport conjugate_gradient(const SparseMatrix& matrix, const Eigen::VectorXd& rhs, double tol,
                               int max_iterations, Exec exec) {
  const Eigen::Index n = rhs.size();
  SolveReport rep;
  rep.trace = Eigen::VectorXd::Zero(n);
  const double rhs_norm = rhs.norm();
  if (rhs_norm == 0.0) return rep;

  const Eigen::VectorXd diag = matrix.diagonal();
  if ((diag.array() <= 0.0).any())
    throw Error(ErrorCode::not_positive_definite, "nonpositive diagonal entry in CG");
  const Eigen::VectorXd inv_diag = diag.cwiseInverse();

  Eigen::VectorXd r = rhs;
  Eigen::VectorXd z = inv_diag.cwiseProduct(r);
  Eigen::VectorXd p = z;
  Eigen::VectorXd q(n);
  double rz = r.dot(z);
  for (int it = 1; it <= max_iterations; ++it) {
    symmetric_matvec(matrix, p, q, exec);
    const double pq = p.dot(q);
    if (!(pq > 0.0)) throw Error(ErrorCode::not_positive_definite, "CG met a nonpositive curvature");
    const double step = rz / pq;
    rep.trace += step * p;
    r -= step * q;
    rep.iterations = it;
    rep.relative_residual = r.norm() / rhs_norm;
    if (rep.relative_residual <= tol) return rep;
    z = inv_diag.cwiseProduct(r);
    const double rz_next = r.dot(z);
    p = z + (rz_next / rz) * p;
    rz = rz_next;
  }
  throw Error(ErrorCode::no_convergence,
              "CG did not reach " + std::to_string(tol) + " in " + std::to_string(max_iterations) +
                  " iterations (residual " + std::to_string(rep.relative_residual) + ")");
}

SolveReport solve(const CondensedSystem& system, SolverMethod method, double tol) {
  if (method == SolverMethod::cg)
    return conjugate_gradient(system.schur, system.load, tol, 10 * std::max(system.dim(), 1));

  SolveReport rep;
  if (system.dim() == 0) return rep;
  Eigen::SimplicialLLT<SparseMatrix> llt(system.schur);
  if (llt.info() != Eigen::Success)
    throw Error(ErrorCode::not_positive_definite, "condensed matrix is not positive definite");
  rep.trace = llt.solve(system.load);
  const double g = system.load.norm();
  rep.relative_residual = g > 0.0 ? (system.schur * rep.trace - system.load).norm() / g : 0.0;
  return rep;
}

DiscreteSolution recover(const Mesh& mesh, const CondensedSystem& system,
                         const Eigen::VectorXd& trace, Exec exec) {
  const auto& dofs = system.dofs;
  const int m = dofs.nodes_per_element();
  DiscreteSolution sol;
  sol.nodes_per_element = m;
  sol.trace = Eigen::Map<const Eigen::VectorXd>(system.boundary.data(),
                                                static_cast<Eigen::Index>(system.boundary.size()));
  for (std::size_t e = 0; e < mesh.edges.size(); ++e)
    for (int j = 0; j < 2; ++j) {
      const int t = dofs.trace_index(static_cast<int>(e), j);
      if (t >= 0) sol.trace(2 * e + j) = trace(t);
    }
  sol.element = Eigen::VectorXd::Zero(dofs.num_element_dofs());
  for_each_index(exec, mesh.elements.size(), [&](std::size_t k) {
    const auto& el = mesh.elements[k];
    Eigen::VectorXd local(2 * m);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < 2; ++j) local(2 * i + j) = sol.trace(2 * el.edges[i] + j);
    const auto& rec = system.recovery[k];
    sol.element.segment(static_cast<Eigen::Index>(k) * m, m) = rec.offset - rec.coupling * local;
  });
  return sol;
}

DiscreteSolution solve_monolithic(const Mesh& mesh, const GlobalSystem& system) {
  Eigen::SimplicialLDLT<SparseMatrix> ldlt(system.matrix);
  if (ldlt.info() != Eigen::Success)
    throw Error(ErrorCode::not_positive_definite, "full system factorization failed");
  const Eigen::VectorXd x = ldlt.solve(system.load);
  const auto& dofs = system.dofs;
  DiscreteSolution sol;
  sol.nodes_per_element = dofs.nodes_per_element();
  sol.element = x.head(dofs.num_element_dofs());
  sol.trace = Eigen::Map<const Eigen::VectorXd>(system.boundary.data(),
                                                static_cast<Eigen::Index>(system.boundary.size()));
  for (std::size_t e = 0; e < mesh.edges.size(); ++e)
    for (int j = 0; j < 2; ++j) {
      const int d = dofs.trace_dof(static_cast<int>(e), j);
      if (d >= 0) sol.trace(2 * e + j) = x(d);
    }
  return sol;
}

Eigen::VectorXd to_global_vector(const Mesh& mesh, const DiscreteSolution& solution) {
  DofMap dofs(mesh);
  Eigen::VectorXd x(dofs.total());
  x.head(dofs.num_element_dofs()) = solution.element;
  for (std::size_t e = 0; e < mesh.edges.size(); ++e)
    for (int j = 0; j < 2; ++j) {
      const int d = dofs.trace_dof(static_cast<int>(e), j);
      if (d >= 0) x(d) = solution.trace(2 * e + j);
    }
  return x;
}

DiscreteSolution interpolate_exact(const Mesh& mesh, const ProblemData& data, Scheme scheme) {
  DiscreteSolution sol;
  const int m = mesh.nodes_per_element();
  sol.nodes_per_element = m;
  sol.element.resize(static_cast<Eigen::Index>(mesh.elements.size()) * m);
  for (std::size_t k = 0; k < mesh.elements.size(); ++k) {
    const auto& el = mesh.elements[k];
    for (int i = 0; i < m; ++i)
      sol.element(k * m + i) = data.exact_value(mesh.vertices[el.vertices[i]], el.subdomain);
  }
  sol.trace.resize(2 * static_cast<Eigen::Index>(mesh.edges.size()));
  for (std::size_t e = 0; e < mesh.edges.size(); ++e) {
    const auto& edge = mesh.edges[e];
    for (int j = 0; j < 2; ++j) {
      const Vec2& x = mesh.vertices[edge.vertices[j]];
      const double first = data.exact_value(x, mesh.elements[edge.elements[0]].subdomain);
      double value = first;
      if (edge.cls == EdgeClass::interface) {
        const double second = data.exact_value(x, mesh.elements[edge.elements[1]].subdomain);
        value = scheme == Scheme::primary ? 0.5 * (first + second) : second;
      }
      sol.trace(2 * e + j) = value;
    }
  }
  return sol;
}

SolveResult solve_problem(const Mesh& mesh, const ProblemData& data, const SchemeParams& params,
                          SolverMethod method, double tol, Exec exec) {
  const auto locals = local_systems(mesh, data, params, exec);
  const auto system = condense(mesh, locals, boundary_traces(mesh, data), exec);
  const auto rep = solve(system, method, tol);
  SolveResult out;
  out.solution = recover(mesh, system, rep.trace, exec);
  out.full_dim = system.dofs.total();
  out.condensed_dim = system.dim();
  out.iterations = rep.iterations;
  out.relative_residual = rep.relative_residual;
  return out;
}

}  // namespace hdgi
