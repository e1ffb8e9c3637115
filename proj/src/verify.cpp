#include "hdgi/verify.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include "hdgi/error.hpp"
#include "hdgi/fem.hpp"

namespace hdgi {

std::string mesh_label(const Mesh& mesh) {
  return mesh.geometry.name + (mesh.kind == ElementKind::rectangle ? "-q1" : "-p1") + "-n" +
         std::to_string(mesh.n);
}

Eigen::Vector2d pencil_extremes(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  const double scale = a.cwiseAbs().maxCoeff();
  if ((a - a.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw Error(ErrorCode::asymmetric_matrix, "pencil matrix is not symmetric");
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> solver(a, b, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success)
    throw Error(ErrorCode::not_positive_definite, "norm Gram matrix is not positive definite");
  const auto& ev = solver.eigenvalues();
  return {ev.minCoeff(), ev.maxCoeff()};
}

Eigen::MatrixXd bilinear_matrix(const Mesh& mesh, const ProblemData& data, const SchemeParams& params) {
  return Eigen::MatrixXd(assemble(mesh, data, params, Exec::serial).matrix);
}

double coercivity_min_eig(const Mesh& mesh, const ProblemData& data, double eta, double norm_eta) {
  const auto B = bilinear_matrix(mesh, data, SchemeParams::uniform(mesh, eta));
  const Eigen::MatrixXd N(hdg_norm_gram(mesh, SchemeParams::uniform(mesh, norm_eta), HdgNorm::one));
  return pencil_extremes(B, N)(0);
}

CoercivityReport coercivity_min_eig(const Mesh& mesh, const ProblemData& data, double eta) {
  return {mesh_label(mesh), eta, coercivity_min_eig(mesh, data, eta, eta)};
}

double boundedness_max_eig(const Mesh& mesh, const ProblemData& data, double eta) {
  const auto params = SchemeParams::uniform(mesh, eta);
  const auto B = bilinear_matrix(mesh, data, params);
  const Eigen::MatrixXd N(hdg_norm_gram(mesh, params, HdgNorm::two));
  return pencil_extremes(B, N)(1);
}

double norm_equivalence_constant(const Mesh& mesh, double eta) {
  const auto params = SchemeParams::uniform(mesh, eta);
  const Eigen::MatrixXd N1(hdg_norm_gram(mesh, params, HdgNorm::one));
  const Eigen::MatrixXd N2(hdg_norm_gram(mesh, params, HdgNorm::two));
  return std::sqrt(pencil_extremes(N2, N1)(1));
}

EtaThreshold eta_star_estimate(const Mesh& mesh, const ProblemData& data, double rel_tol) {
  constexpr double floor_eta = 1e-6;
  auto coercive = [&](double eta) { return coercivity_min_eig(mesh, data, eta, eta) > 0.0; };
  if (coercive(floor_eta)) return {0.0, false};

  double lo = floor_eta;
  double hi = 1.0;
  while (!coercive(hi)) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e8) throw Error(ErrorCode::not_positive_definite, "no coercive penalty below 1e8");
  }
  while (hi / lo - 1.0 > rel_tol) {
    const double mid = std::sqrt(lo * hi);
    (coercive(mid) ? hi : lo) = mid;
  }
  return {hi, true};
}

namespace {

struct ProbeMatrices {
  Eigen::MatrixXd mass, stiffness, hessian;
  std::vector<Eigen::MatrixXd> edge_mass, edge_grad;
};

ProbeMatrices probe_matrices(const Mesh& mesh, int element) {
  const int m = mesh.nodes_per_element();
  const ElementMap map = element_map(mesh, element);
  ProbeMatrices p;
  p.mass = Eigen::MatrixXd::Zero(m, m);
  p.stiffness = Eigen::MatrixXd::Zero(m, m);
  p.hessian = Eigen::MatrixXd::Zero(m, m);
  const auto& rule = map.element_rule(4);
  for (std::size_t q = 0; q < rule.size(); ++q) {
    const auto s = map.sample(rule.points[q]);
    const double w = rule.weights[q] * s.det;
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) {
        p.mass(i, j) += w * s.basis.value[i] * s.basis.value[j];
        p.stiffness(i, j) += w * s.basis.grad[i].dot(s.basis.grad[j]);
      }
  }
  const auto H = map.physical_hessians();
  const double area = element_area(mesh, element);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) p.hessian(i, j) = area * hessian_inner(H[i], H[j]);
  for (int e = 0; e < m; ++e) {
    Eigen::MatrixXd em = Eigen::MatrixXd::Zero(m, m), eg = Eigen::MatrixXd::Zero(m, m);
    for (const auto& pt : edge_points(mesh, map, element, e, 4)) {
      const auto& b = pt.sample.basis;
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
          em(i, j) += pt.weight * b.value[i] * b.value[j];
          eg(i, j) += pt.weight * b.grad[i].dot(b.grad[j]);
        }
    }
    p.edge_mass.push_back(em);
    p.edge_grad.push_back(eg);
  }
  return p;
}

// Columns spanning the complement of the constant functions.
Eigen::MatrixXd nonconstant_basis(int m) {
  const Eigen::MatrixXd q = Eigen::HouseholderQR<Eigen::MatrixXd>(Eigen::MatrixXd::Ones(m, 1)).householderQ();
  return q.rightCols(m - 1);
}

}  // namespace

double inequality_probe(const Mesh& mesh, int element, Inequality which) {
  const auto p = probe_matrices(mesh, element);
  const double hK = element_diameter(mesh, element);
  const int m = mesh.nodes_per_element();
  if (which == Inequality::inverse) return hK * hK * pencil_extremes(p.stiffness, p.mass)(1);

  double best = 0.0;
  const auto& el = mesh.elements[element];
  const Eigen::MatrixXd Q = nonconstant_basis(m);
  for (int e = 0; e < m; ++e) {
    const double he = mesh.edges[el.edges[e]].length;
    double value = 0.0;
    if (which == Inequality::trace0) {
      value = he * pencil_extremes(p.edge_mass[e], p.mass + hK * hK * p.stiffness)(1);
    } else {
      const Eigen::MatrixXd num = Q.transpose() * p.edge_grad[e] * Q;
      const Eigen::MatrixXd den = Q.transpose() * (p.stiffness + hK * hK * p.hessian) * Q;
      value = he * pencil_extremes(0.5 * (num + num.transpose()), den)(1);
    }
    best = std::max(best, value);
  }
  return best;
}

std::string to_csv(std::span<const CoercivityReport> reports) {
  std::ostringstream out;
  out << "mesh,eta,min_eig\n";
  char buf[64];
  for (const auto& r : reports) {
    std::snprintf(buf, sizeof buf, "%.6g,%.6g", r.eta, r.min_eig);
    out << r.mesh_id << ',' << buf << '\n';
  }
  return out.str();
}

}  // namespace hdgi
