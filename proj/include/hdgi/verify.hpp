#pragma once

#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "hdgi/assembly.hpp"
#include "hdgi/norms.hpp"

namespace hdgi {

// Dense certificates on concrete small meshes. Each eigenproblem is the
// symmetric pencil (B, N) with N a Gram matrix of one of the HDG norms.

struct CoercivityReport {
  std::string mesh_id;
  double eta = 0.0;
  double min_eig = 0.0;
};

/// Label such as "example1-q1-n4".
std::string mesh_label(const Mesh& mesh);

/// Extreme generalized eigenvalues of the symmetric pencil (a, b), b SPD.
/// Throws AsymmetricMatrix if `a` is not symmetric to 1e-12 relative.
Eigen::Vector2d pencil_extremes(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);

/// Bilinear-form matrix over all unknowns (no loads).
Eigen::MatrixXd bilinear_matrix(const Mesh& mesh, const ProblemData& data, const SchemeParams& params);

/// Smallest eigenvalue of (B, N_1h) with uniform penalty eta.
CoercivityReport coercivity_min_eig(const Mesh& mesh, const ProblemData& data, double eta);
/// Same, with the norm Gram built from a separate penalty.
double coercivity_min_eig(const Mesh& mesh, const ProblemData& data, double eta, double norm_eta);

/// Largest eigenvalue of (B, N_2h): an empirical boundedness constant.
double boundedness_max_eig(const Mesh& mesh, const ProblemData& data, double eta);

/// Smallest C0 with ||v||_2h <= C0 ||v||_1h on the discrete space.
double norm_equivalence_constant(const Mesh& mesh, double eta);

struct EtaThreshold {
  double eta = 0.0;          ///< 0 when already coercive at the search floor
  bool sign_change = false;  ///< false reports NoSignChange
};

/// Bisection (in log eta) for the sign change of the minimum eigenvalue.
EtaThreshold eta_star_estimate(const Mesh& mesh, const ProblemData& data, double rel_tol = 1e-4);

enum class Inequality { inverse, trace0, trace1 };

/// Sup of the scale-free Rayleigh quotient over the local polynomial space,
/// maximised over the element's edges for the trace variants:
///   inverse: |v|_1^2 / (h_K^-2 ||v||^2)
///   trace0:  ||v||_e^2 / (h_e^-1 (||v||^2 + h_K^2 |v|_1^2))
///   trace1:  ||grad v||_e^2 / (h_e^-1 (|v|_1^2 + h_K^2 |v|_2^2))
double inequality_probe(const Mesh& mesh, int element, Inequality which);

/// "mesh,eta,min_eig" with one row per report.
std::string to_csv(std::span<const CoercivityReport> reports);

}  // namespace hdgi
