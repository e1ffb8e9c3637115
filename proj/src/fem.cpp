#include "hdgi/fem.hpp"

#include <cmath>
#include <numbers>

#include <Eigen/LU>

#include "hdgi/error.hpp"

namespace hdgi {

namespace {

constexpr std::array<double, 4> kQ1Xi{-1.0, 1.0, 1.0, -1.0};
constexpr std::array<double, 4> kQ1Eta{-1.0, -1.0, 1.0, 1.0};

const std::array<Vec2, 3> kTriangleVertices{Vec2(0.0, 0.0), Vec2(1.0, 0.0), Vec2(0.0, 1.0)};
const std::array<Vec2, 4> kSquareVertices{Vec2(-1.0, -1.0), Vec2(1.0, -1.0), Vec2(1.0, 1.0),
                                          Vec2(-1.0, 1.0)};

constexpr int kMaxDegree = 9;

}  // namespace

BasisValues basis_eval(ElementKind kind, const Vec2& ref) {
  BasisValues b;
  const double xi = ref.x(), eta = ref.y();
  if (kind == ElementKind::triangle) {
    b.count = 3;
    b.value = {1.0 - xi - eta, xi, eta, 0.0};
    b.grad = {Vec2(-1.0, -1.0), Vec2(1.0, 0.0), Vec2(0.0, 1.0), Vec2::Zero()};
    return b;
  }
  b.count = 4;
  for (int i = 0; i < 4; ++i) {
    const double fx = 1.0 + kQ1Xi[i] * xi;
    const double fy = 1.0 + kQ1Eta[i] * eta;
    b.value[i] = 0.25 * fx * fy;
    b.grad[i] = Vec2(0.25 * kQ1Xi[i] * fy, 0.25 * kQ1Eta[i] * fx);
  }
  return b;
}

std::array<Eigen::Matrix2d, 4> basis_hessians(ElementKind kind) {
  std::array<Eigen::Matrix2d, 4> h;
  for (auto& m : h) m.setZero();
  if (kind == ElementKind::rectangle) {
    for (int i = 0; i < 4; ++i) {
      const double mixed = 0.25 * kQ1Xi[i] * kQ1Eta[i];
      h[i] << 0.0, mixed, mixed, 0.0;
    }
  }
  return h;
}

std::span<const Vec2> reference_vertices(ElementKind kind) {
  if (kind == ElementKind::triangle) return {kTriangleVertices.data(), kTriangleVertices.size()};
  return {kSquareVertices.data(), kSquareVertices.size()};
}

void gauss_legendre(int npoints, std::vector<double>& nodes, std::vector<double>& weights) {
  nodes.assign(npoints, 0.0);
  weights.assign(npoints, 0.0);
  for (int i = 0; i < npoints; ++i) {
    // Chebyshev initial guess, then Newton on P_n.
    double x = std::cos(std::numbers::pi * (i + 0.75) / (npoints + 0.5));
    double dp = 1.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= npoints; ++k) {
        const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      dp = npoints * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    nodes[npoints - 1 - i] = x;
    weights[npoints - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
}

QuadratureRule quad_rule(QuadDomain domain, int degree) {
  if (degree < 0 || degree > kMaxDegree)
    throw Error(ErrorCode::invalid_param, "unsupported quadrature degree " + std::to_string(degree));

  QuadratureRule rule;
  rule.degree = degree;
  std::vector<double> x, w;

  switch (domain) {
    case QuadDomain::edge: {
      gauss_legendre(degree / 2 + 1, x, w);
      for (std::size_t i = 0; i < x.size(); ++i) {
        rule.points.emplace_back(x[i], 0.0);
        rule.weights.push_back(w[i]);
      }
      break;
    }
    case QuadDomain::rectangle: {
      gauss_legendre(degree / 2 + 1, x, w);
      for (std::size_t j = 0; j < x.size(); ++j)
        for (std::size_t i = 0; i < x.size(); ++i) {
          rule.points.emplace_back(x[i], x[j]);
          rule.weights.push_back(w[i] * w[j]);
        }
      break;
    }
    case QuadDomain::triangle: {
      if (degree <= 1) {
        rule.points = {Vec2(1.0 / 3.0, 1.0 / 3.0)};
        rule.weights = {0.5};
      } else if (degree == 2) {
        rule.points = {Vec2(0.5, 0.0), Vec2(0.5, 0.5), Vec2(0.0, 0.5)};
        rule.weights = {1.0 / 6.0, 1.0 / 6.0, 1.0 / 6.0};
      } else {
        // Collapsed (Duffy) tensor rule; the extra power from the Jacobian
        // needs one more degree of exactness in the collapsed direction.
        gauss_legendre((degree + 2) / 2 + 1, x, w);
        for (std::size_t j = 0; j < x.size(); ++j) {
          const double v = 0.5 * (1.0 + x[j]);
          for (std::size_t i = 0; i < x.size(); ++i) {
            const double u = 0.5 * (1.0 + x[i]);
            rule.points.emplace_back(u * (1.0 - v), v);
            rule.weights.push_back(0.25 * w[i] * w[j] * (1.0 - v));
          }
        }
      }
      break;
    }
  }
  return rule;
}

namespace {

const QuadratureRule& cached_rule(QuadDomain domain, int degree) {
  static const auto table = [] {
    std::array<std::array<QuadratureRule, kMaxDegree + 1>, 3> t;
    for (int d = 0; d <= kMaxDegree; ++d) {
      t[0][d] = quad_rule(QuadDomain::edge, d);
      t[1][d] = quad_rule(QuadDomain::triangle, d);
      t[2][d] = quad_rule(QuadDomain::rectangle, d);
    }
    return t;
  }();
  if (degree < 0 || degree > kMaxDegree)
    throw Error(ErrorCode::invalid_param, "unsupported quadrature degree " + std::to_string(degree));
  return table[static_cast<int>(domain)][degree];
}

}  // namespace

ElementMap::ElementMap(ElementKind kind, std::span<const Vec2> vertices) : kind_(kind) {
  const std::size_t expected = kind == ElementKind::triangle ? 3 : 4;
  if (vertices.size() != expected)
    throw Error(ErrorCode::invalid_param, "wrong vertex count for element map");
  std::copy(vertices.begin(), vertices.end(), v_.begin());
}

Vec2 ElementMap::to_physical(const Vec2& ref) const {
  const auto b = basis_eval(kind_, ref);
  Vec2 x = Vec2::Zero();
  for (int i = 0; i < b.count; ++i) x += b.value[i] * v_[i];
  return x;
}

Eigen::Matrix2d ElementMap::jacobian(const Vec2& ref) const {
  const auto b = basis_eval(kind_, ref);
  Eigen::Matrix2d J = Eigen::Matrix2d::Zero();
  for (int i = 0; i < b.count; ++i) J += v_[i] * b.grad[i].transpose();
  return J;
}

Vec2 ElementMap::to_reference(const Vec2& x) const {
  Vec2 ref = kind_ == ElementKind::triangle ? Vec2(1.0 / 3.0, 1.0 / 3.0) : Vec2::Zero();
  for (int iter = 0; iter < 20; ++iter) {
    const Vec2 r = to_physical(ref) - x;
    const Vec2 step = jacobian(ref).lu().solve(r);
    ref -= step;
    if (step.norm() < 1e-15) break;
  }
  return ref;
}

ElementMap::Sample ElementMap::sample(const Vec2& ref) const {
  Sample s;
  s.basis = basis_eval(kind_, ref);
  Eigen::Matrix2d J = Eigen::Matrix2d::Zero();
  s.x.setZero();
  for (int i = 0; i < s.basis.count; ++i) {
    J += v_[i] * s.basis.grad[i].transpose();
    s.x += s.basis.value[i] * v_[i];
  }
  s.det = J.determinant();
  const Eigen::Matrix2d JinvT = J.inverse().transpose();
  for (int i = 0; i < s.basis.count; ++i) s.basis.grad[i] = JinvT * s.basis.grad[i];
  return s;
}

std::array<Eigen::Matrix2d, 4> ElementMap::physical_hessians() const {
  const Eigen::Matrix2d Jinv = jacobian(Vec2::Zero()).inverse();
  auto h = basis_hessians(kind_);
  for (auto& m : h) m = Jinv.transpose() * m * Jinv;
  return h;
}

const QuadratureRule& ElementMap::element_rule(int degree) const {
  return cached_rule(kind_ == ElementKind::triangle ? QuadDomain::triangle : QuadDomain::rectangle,
                     degree);
}

Vec2 reference_edge_point(ElementKind kind, int local_edge, double t) {
  const auto verts = reference_vertices(kind);
  const Vec2& a = verts[local_edge];
  const Vec2& b = verts[(local_edge + 1) % verts.size()];
  return (1.0 - t) * a + t * b;
}

const QuadratureRule& edge_rule(int degree) { return cached_rule(QuadDomain::edge, degree); }

ElementMap element_map(const Mesh& mesh, int element) {
  const auto verts = mesh.element_vertices(element);
  return ElementMap(mesh.kind, verts);
}

std::vector<EdgePoint> edge_points(const Mesh& mesh, const ElementMap& map, int element,
                                   int local_edge, int degree) {
  const auto& el = mesh.elements[element];
  const auto& edge = mesh.edges[el.edges[local_edge]];
  const bool aligned = el.vertices[local_edge] == edge.vertices[0];
  const auto& rule = edge_rule(degree);
  std::vector<EdgePoint> out(rule.size());
  for (std::size_t q = 0; q < rule.size(); ++q) {
    const double t = 0.5 * (rule.points[q].x() + 1.0);
    const double s = aligned ? t : 1.0 - t;
    out[q].weight = 0.5 * rule.weights[q] * edge.length;
    out[q].sample = map.sample(reference_edge_point(mesh.kind, local_edge, t));
    out[q].trace = {1.0 - s, s};
  }
  return out;
}

}  // namespace hdgi
