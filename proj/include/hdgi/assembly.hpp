#pragma once

#include <span>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "hdgi/mesh.hpp"
#include "hdgi/parallel.hpp"
#include "hdgi/problem.hpp"

namespace hdgi {

using SparseMatrix = Eigen::SparseMatrix<double>;

/// PRIMARY splits the penalty jump term evenly between both sides of the
/// interface (sigma = +-1); ALTERNATIVE places it on the subdomain-1 side.
enum class Scheme { primary, alternative };

struct SchemeParams {
  Scheme scheme = Scheme::primary;
  std::vector<double> eta;  ///< penalty per edge id

  static SchemeParams uniform(const Mesh& mesh, double eta, Scheme scheme = Scheme::primary);
  [[nodiscard]] double eta_min() const;
  [[nodiscard]] double eta_max() const;
};

/// eta = 10 lambda_max.
double default_penalty(const ProblemData& data);

/// Element unknowns are numbered first (element k owns k*m .. k*m+m-1), then
/// two trace unknowns per interior or interface edge in edge-id order.
/// Boundary edges carry no unknowns; their trace values are prescribed.
class DofMap {
public:
  explicit DofMap(const Mesh& mesh);

  [[nodiscard]] int nodes_per_element() const { return m_; }
  [[nodiscard]] int num_element_dofs() const { return num_element_dofs_; }
  [[nodiscard]] int num_trace_dofs() const { return num_trace_dofs_; }
  [[nodiscard]] int total() const { return num_element_dofs_ + num_trace_dofs_; }
  [[nodiscard]] int element_dof(int element, int i) const { return element * m_ + i; }
  /// Index among trace unknowns only, or -1 on boundary edges.
  [[nodiscard]] int trace_index(int edge, int j) const {
    return trace_offset_[edge] < 0 ? -1 : trace_offset_[edge] + j;
  }
  /// Index in the full system, or -1 on boundary edges.
  [[nodiscard]] int trace_dof(int edge, int j) const {
    const int t = trace_index(edge, j);
    return t < 0 ? -1 : num_element_dofs_ + t;
  }

private:
  int m_;
  int num_element_dofs_;
  int num_trace_dofs_;
  std::vector<int> trace_offset_;
};

/// Element matrix over [u_K (m) | traces of every local edge (2 each)],
/// boundary edges included; assembly moves prescribed traces to the load.
/// Trace slot 2i+j belongs to vertex j (global edge order) of local edge i.
struct LocalSystem {
  Eigen::MatrixXd matrix;
  Eigen::VectorXd load;
  int nu = 0;

  [[nodiscard]] auto uu() const { return matrix.topLeftCorner(nu, nu); }
  [[nodiscard]] auto ut() const { return matrix.topRightCorner(nu, matrix.cols() - nu); }
  [[nodiscard]] auto tu() const { return matrix.bottomLeftCorner(matrix.rows() - nu, nu); }
  [[nodiscard]] auto tt() const { return matrix.bottomRightCorner(matrix.rows() - nu, matrix.cols() - nu); }
  [[nodiscard]] auto bu() const { return load.head(nu); }
  [[nodiscard]] auto bt() const { return load.tail(load.size() - nu); }
};

/// sigma_{K,e}: +1 on the subdomain-1 side; -1 (PRIMARY) or 0 (ALTERNATIVE)
/// on the subdomain-2 side. Throws NotInterfaceEdge.
double sigma_factor(Scheme scheme, const Mesh& mesh, int element, int edge);

LocalSystem local_system(int element, const Mesh& mesh, const ProblemData& data,
                         const SchemeParams& params);
std::vector<LocalSystem> local_systems(const Mesh& mesh, const ProblemData& data,
                                       const SchemeParams& params, Exec exec = Exec::parallel);

/// Prescribed trace values, two per edge (edge-vertex order); zero on
/// non-boundary edges.
std::vector<double> boundary_traces(const Mesh& mesh, const ProblemData& data);

struct GlobalSystem {
  SparseMatrix matrix;
  Eigen::VectorXd load;
  DofMap dofs;
  std::vector<double> boundary;
};

/// Scatters the local systems in element order, so the result does not
/// depend on how the locals were produced.
GlobalSystem scatter(const Mesh& mesh, std::span<const LocalSystem> locals,
                     std::vector<double> boundary);
GlobalSystem assemble(const Mesh& mesh, const ProblemData& data, const SchemeParams& params,
                      Exec exec = Exec::parallel);

}  // namespace hdgi
