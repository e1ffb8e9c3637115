#include "hdgi/assembly.hpp"

#include <algorithm>

#include "hdgi/error.hpp"
#include "hdgi/fem.hpp"

namespace hdgi {

namespace {

// Data are trigonometric, so every integral uses the degree-9 rules; this
// keeps quadrature error far below discretisation error at all tested levels.
constexpr int kQuadDegree = 9;

// Weight of the one-sided conormal trace of element K in the g_D load term.
// The primary scheme averages both sides; the alternative scheme only sees
// the subdomain-1 side, mirroring where it places the penalty jump.
double conormal_weight(Scheme scheme, int subdomain) {
  if (scheme == Scheme::primary) return 0.5;
  return subdomain == 1 ? 1.0 : 0.0;
}

// Coefficient multiplying (eta/h) g_D (v - v_hat) on element K.
double penalty_jump_weight(Scheme scheme, int subdomain) {
  if (scheme == Scheme::primary) return subdomain == 1 ? 0.5 : -0.5;
  return subdomain == 1 ? 1.0 : 0.0;
}

}  // namespace

SchemeParams SchemeParams::uniform(const Mesh& mesh, double eta, Scheme scheme) {
  if (!(eta > 0.0)) throw Error(ErrorCode::invalid_param, "penalty must be positive");
  return SchemeParams{scheme, std::vector<double>(mesh.edges.size(), eta)};
}

double SchemeParams::eta_min() const { return *std::min_element(eta.begin(), eta.end()); }
double SchemeParams::eta_max() const { return *std::max_element(eta.begin(), eta.end()); }

double default_penalty(const ProblemData& data) { return 10.0 * data.coefficient.lambda_max; }

DofMap::DofMap(const Mesh& mesh)
    : m_(mesh.nodes_per_element()),
      num_element_dofs_(static_cast<int>(mesh.elements.size()) * m_),
      num_trace_dofs_(0),
      trace_offset_(mesh.edges.size(), -1) {
  for (std::size_t e = 0; e < mesh.edges.size(); ++e) {
    if (mesh.edges[e].cls == EdgeClass::boundary) continue;
    trace_offset_[e] = num_trace_dofs_;
    num_trace_dofs_ += 2;
  }
}

double sigma_factor(Scheme scheme, const Mesh& mesh, int element, int edge) {
  const auto& e = mesh.edges.at(edge);
  if (e.cls != EdgeClass::interface || (e.elements[0] != element && e.elements[1] != element))
    throw Error(ErrorCode::not_interface_edge,
                "edge " + std::to_string(edge) + " is not an interface edge of element " +
                    std::to_string(element));
  if (mesh.elements[element].subdomain == 1) return 1.0;
  return scheme == Scheme::primary ? -1.0 : 0.0;
}

LocalSystem local_system(int element, const Mesh& mesh, const ProblemData& data,
                         const SchemeParams& params) {
  const auto& el = mesh.elements[element];
  const int m = el.num_vertices;
  const int sd = el.subdomain;
  const int size = 3 * m;

  LocalSystem ls;
  ls.nu = m;
  ls.matrix = Eigen::MatrixXd::Zero(size, size);
  ls.load = Eigen::VectorXd::Zero(size);
  auto& M = ls.matrix;
  auto& b = ls.load;

  const ElementMap map = element_map(mesh, element);
  const auto& rule = map.element_rule(kQuadDegree);
  for (std::size_t q = 0; q < rule.size(); ++q) {
    const auto s = map.sample(rule.points[q]);
    const double w = rule.weights[q] * s.det;
    const Eigen::Matrix2d A = data.A(s.x, sd);
    const double f = data.f(s.x, sd);
    for (int j = 0; j < m; ++j) {
      const Vec2 flux = A * s.basis.grad[j];
      for (int i = 0; i < m; ++i) M(i, j) += w * flux.dot(s.basis.grad[i]);
      b(j) += w * f * s.basis.value[j];
    }
  }

  for (int i = 0; i < m; ++i) {
    const int e = el.edges[i];
    const auto& edge = mesh.edges[e];
    const Vec2 normal = el.edge_sign[i] * edge.normal;
    const double pen = params.eta[e] / edge.length;
    const int t0 = m + 2 * i;
    const bool interface = edge.cls == EdgeClass::interface;
    const double conormal_w = interface ? conormal_weight(params.scheme, sd) : 0.0;
    const double jump_w = interface ? penalty_jump_weight(params.scheme, sd) : 0.0;

    for (const auto& p : edge_points(mesh, map, element, i, kQuadDegree)) {
      const auto& N = p.sample.basis;
      const Eigen::Matrix2d A = data.A(p.sample.x, sd);
      std::array<double, 4> flux{};  // (A grad N_j) . n_K
      for (int j = 0; j < m; ++j) flux[j] = (A * N.grad[j]).dot(normal);

      for (int r = 0; r < m; ++r) {
        for (int c = 0; c < m; ++c) {
          // B2 + B3 on the u-u block, then B4.
          M(r, c) += p.weight * (-flux[c] * N.value[r] - flux[r] * N.value[c] +
                                 pen * N.value[r] * N.value[c]);
        }
        for (int k = 0; k < 2; ++k) {
          const double v = p.weight * (flux[r] * p.trace[k] - pen * N.value[r] * p.trace[k]);
          M(r, t0 + k) += v;
          M(t0 + k, r) += v;
        }
      }
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l) M(t0 + k, t0 + l) += p.weight * pen * p.trace[k] * p.trace[l];

      if (!interface) continue;
      const double gD = data.g_D(p.sample.x);
      const double gN = data.g_N(p.sample.x);
      const Vec2& n1 = edge.normal;
      for (int r = 0; r < m; ++r) {
        b(r) -= p.weight * conormal_w * gD * (A * N.grad[r]).dot(n1);
        b(r) += p.weight * jump_w * pen * gD * N.value[r];
      }
      for (int k = 0; k < 2; ++k) {
        b(t0 + k) += p.weight * 0.5 * gN * p.trace[k];
        b(t0 + k) -= p.weight * jump_w * pen * gD * p.trace[k];
      }
    }
  }
  return ls;
}

std::vector<LocalSystem> local_systems(const Mesh& mesh, const ProblemData& data,
                                       const SchemeParams& params, Exec exec) {
  if (params.eta.size() != mesh.edges.size())
    throw Error(ErrorCode::invalid_param, "penalty map does not match the mesh");
  std::vector<LocalSystem> out(mesh.elements.size());
  for_each_index(exec, out.size(), [&](std::size_t k) {
    out[k] = local_system(static_cast<int>(k), mesh, data, params);
  });
  return out;
}

std::vector<double> boundary_traces(const Mesh& mesh, const ProblemData& data) {
  std::vector<double> out(2 * mesh.edges.size(), 0.0);
  for (std::size_t e = 0; e < mesh.edges.size(); ++e) {
    const auto& edge = mesh.edges[e];
    if (edge.cls != EdgeClass::boundary) continue;
    const int sd = mesh.elements[edge.elements[0]].subdomain;
    for (int j = 0; j < 2; ++j) out[2 * e + j] = data.boundary_value(mesh.vertices[edge.vertices[j]], sd);
  }
  return out;
}

GlobalSystem scatter(const Mesh& mesh, std::span<const LocalSystem> locals,
                     std::vector<double> boundary) {
  DofMap dofs(mesh);
  const int m = dofs.nodes_per_element();
  GlobalSystem sys{SparseMatrix(dofs.total(), dofs.total()), Eigen::VectorXd::Zero(dofs.total()),
                   dofs, std::move(boundary)};

  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(locals.size() * 9 * m * m);
  std::vector<int> global(3 * m);
  std::vector<double> prescribed(3 * m);
  for (std::size_t k = 0; k < locals.size(); ++k) {
    const auto& el = mesh.elements[k];
    const int K = static_cast<int>(k);
    for (int i = 0; i < m; ++i) {
      global[i] = dofs.element_dof(K, i);
      for (int j = 0; j < 2; ++j) {
        const int e = el.edges[i];
        global[m + 2 * i + j] = dofs.trace_dof(e, j);
        prescribed[m + 2 * i + j] = sys.boundary[2 * e + j];
      }
    }
    const auto& ls = locals[k];
    for (int r = 0; r < 3 * m; ++r) {
      if (global[r] < 0) continue;
      sys.load(global[r]) += ls.load(r);
      for (int c = 0; c < 3 * m; ++c) {
        if (global[c] < 0)
          sys.load(global[r]) -= ls.matrix(r, c) * prescribed[c];
        else
          triplets.emplace_back(global[r], global[c], ls.matrix(r, c));
      }
    }
  }
  sys.matrix.setFromTriplets(triplets.begin(), triplets.end());
  return sys;
}

GlobalSystem assemble(const Mesh& mesh, const ProblemData& data, const SchemeParams& params,
                      Exec exec) {
  const auto locals = local_systems(mesh, data, params, exec);
  return scatter(mesh, locals, boundary_traces(mesh, data));
}

}  // namespace hdgi
