#include "hdgi/norms.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "hdgi/error.hpp"
#include "hdgi/fem.hpp"

namespace hdgi {

namespace {

constexpr int kErrorDegree = 9;
// Products of Q1 functions have total degree <= 4.
constexpr int kNormDegree = 4;

struct Evaluated {
  double value = 0.0;
  Vec2 grad = Vec2::Zero();
};

Evaluated evaluate(const ElementMap::Sample& s, const Eigen::Ref<const Eigen::VectorXd>& coeffs) {
  Evaluated out;
  for (int i = 0; i < s.basis.count; ++i) {
    out.value += coeffs(i) * s.basis.value[i];
    out.grad += coeffs(i) * s.basis.grad[i];
  }
  return out;
}

ErrorNorms finish(const std::vector<ErrorNorms>& per_element) {
  ErrorNorms total;
  for (const auto& e : per_element) {
    total.energy += e.energy;
    total.l2 += e.l2;
  }
  return {std::sqrt(total.energy), std::sqrt(total.l2)};
}

// Local squared-norm Gram over [v_K | traces of local edges].
Eigen::MatrixXd local_gram(const Mesh& mesh, int element, const SchemeParams& params, HdgNorm which) {
  const auto& el = mesh.elements[element];
  const int m = el.num_vertices;
  Eigen::MatrixXd G = Eigen::MatrixXd::Zero(3 * m, 3 * m);
  const ElementMap map = element_map(mesh, element);
  const auto& rule = map.element_rule(kNormDegree);
  for (std::size_t q = 0; q < rule.size(); ++q) {
    const auto s = map.sample(rule.points[q]);
    const double w = rule.weights[q] * s.det;
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) G(i, j) += w * s.basis.grad[i].dot(s.basis.grad[j]);
  }
  if (which == HdgNorm::two) {
    const double hK = element_diameter(mesh, element);
    const double area = element_area(mesh, element);
    const auto H = map.physical_hessians();
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) G(i, j) += hK * hK * area * hessian_inner(H[i], H[j]);
  }
  for (int i = 0; i < m; ++i) {
    const int e = el.edges[i];
    const double pen = params.eta[e] / mesh.edges[e].length;
    const int t0 = m + 2 * i;
    for (const auto& p : edge_points(mesh, map, element, i, kNormDegree)) {
      // (v - v_hat) as a row over the local unknowns.
      Eigen::VectorXd row = Eigen::VectorXd::Zero(3 * m);
      for (int r = 0; r < m; ++r) row(r) = p.sample.basis.value[r];
      row(t0) = -p.trace[0];
      row(t0 + 1) = -p.trace[1];
      G += p.weight * pen * row * row.transpose();
    }
  }
  return G;
}

}  // namespace

ErrorNorms errors_vs_exact(const Mesh& mesh, const DiscreteSolution& uh, const ProblemData& data,
                           Exec exec) {
  if (!data.has_exact())
    throw Error(ErrorCode::missing_exact, "preset '" + data.name + "' has no exact solution");
  std::vector<ErrorNorms> parts(mesh.elements.size());
  for_each_index(exec, parts.size(), [&](std::size_t k) {
    const int K = static_cast<int>(k);
    const int sd = mesh.elements[k].subdomain;
    const ElementMap map = element_map(mesh, K);
    const auto& rule = map.element_rule(kErrorDegree);
    const auto coeffs = uh.element_coeffs(K);
    ErrorNorms acc;
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const auto s = map.sample(rule.points[q]);
      const double w = rule.weights[q] * s.det;
      const auto v = evaluate(s, coeffs);
      acc.l2 += w * std::pow(data.exact_value(s.x, sd) - v.value, 2);
      acc.energy += w * (data.exact_gradient(s.x, sd) - v.grad).squaredNorm();
    }
    parts[k] = acc;
  });
  return finish(parts);
}

ErrorNorms errors_vs_reference(const Mesh& mesh, const DiscreteSolution& uh, const Mesh& ref_mesh,
                               const DiscreteSolution& ref, Exec exec) {
  if (!is_refinement(ref_mesh, mesh))
    throw Error(ErrorCode::not_nested, "reference mesh n=" + std::to_string(ref_mesh.n) +
                                           " does not refine n=" + std::to_string(mesh.n));
  std::vector<ErrorNorms> parts(ref_mesh.elements.size());
  for_each_index(exec, parts.size(), [&](std::size_t k) {
    const int K = static_cast<int>(k);
    const int parent = mesh.locate(ref_mesh.centroid(K));
    const ElementMap fine = element_map(ref_mesh, K);
    const ElementMap coarse = element_map(mesh, parent);
    const auto& rule = fine.element_rule(kErrorDegree);
    ErrorNorms acc;
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const auto s = fine.sample(rule.points[q]);
      const double w = rule.weights[q] * s.det;
      const auto u = evaluate(s, ref.element_coeffs(K));
      const auto v = evaluate(coarse.sample(coarse.to_reference(s.x)), uh.element_coeffs(parent));
      acc.l2 += w * std::pow(u.value - v.value, 2);
      acc.energy += w * (u.grad - v.grad).squaredNorm();
    }
    parts[k] = acc;
  });
  return finish(parts);
}

double l2_error(const Mesh& mesh, const DiscreteSolution& uh, const ProblemData& data) {
  return errors_vs_exact(mesh, uh, data).l2;
}

double h1_broken_error(const Mesh& mesh, const DiscreteSolution& uh, const ProblemData& data) {
  return errors_vs_exact(mesh, uh, data).energy;
}

double hdg_norm(const Mesh& mesh, const DiscreteSolution& v, const SchemeParams& params, HdgNorm which) {
  const int m = mesh.nodes_per_element();
  double total = 0.0;
  Eigen::VectorXd local(3 * m);
  for (std::size_t k = 0; k < mesh.elements.size(); ++k) {
    const auto& el = mesh.elements[k];
    local.head(m) = v.element_coeffs(static_cast<int>(k));
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < 2; ++j) local(m + 2 * i + j) = v.trace_value(el.edges[i], j);
    total += local.dot(local_gram(mesh, static_cast<int>(k), params, which) * local);
  }
  return std::sqrt(total);
}

SparseMatrix hdg_norm_gram(const Mesh& mesh, const SchemeParams& params, HdgNorm which) {
  DofMap dofs(mesh);
  const int m = dofs.nodes_per_element();
  std::vector<Eigen::Triplet<double>> triplets;
  std::vector<int> global(3 * m);
  for (std::size_t k = 0; k < mesh.elements.size(); ++k) {
    const int K = static_cast<int>(k);
    const auto& el = mesh.elements[k];
    for (int i = 0; i < m; ++i) {
      global[i] = dofs.element_dof(K, i);
      for (int j = 0; j < 2; ++j) global[m + 2 * i + j] = dofs.trace_dof(el.edges[i], j);
    }
    const auto G = local_gram(mesh, K, params, which);
    for (int r = 0; r < 3 * m; ++r)
      for (int c = 0; c < 3 * m; ++c)
        if (global[r] >= 0 && global[c] >= 0) triplets.emplace_back(global[r], global[c], G(r, c));
  }
  SparseMatrix out(dofs.total(), dofs.total());
  out.setFromTriplets(triplets.begin(), triplets.end());
  return out;
}

ConvergenceRecord rates(std::span<const LevelErrors> levels) {
  ConvergenceRecord rec;
  for (std::size_t i = 0; i < levels.size(); ++i) {
    ConvergenceRow row;
    row.h = levels[i].h;
    row.energy = levels[i].energy;
    row.l2 = levels[i].l2;
    if (i > 0) {
      const auto& prev = levels[i - 1];
      if (std::abs(prev.h - 2.0 * row.h) > 1e-12 * prev.h)
        throw Error(ErrorCode::bad_sequence, "h must halve between consecutive levels");
      row.energy_rate = (std::log(prev.energy) - std::log(row.energy)) / std::log(2.0);
      row.l2_rate = (std::log(prev.l2) - std::log(row.l2)) / std::log(2.0);
    }
    rec.rows.push_back(row);
  }
  return rec;
}

std::string ConvergenceRecord::to_csv() const {
  auto fmt = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return std::string(buf);
  };
  std::ostringstream out;
  out << "h,E_h,R_h,e_h,r_h\n";
  for (const auto& r : rows) {
    out << fmt(r.h) << ',' << fmt(r.energy) << ',' << (r.energy_rate ? fmt(*r.energy_rate) : "")
        << ',' << fmt(r.l2) << ',' << (r.l2_rate ? fmt(*r.l2_rate) : "") << '\n';
  }
  return out.str();
}

}  // namespace hdgi
