#pragma once

#include <array>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "hdgi/mesh.hpp"

namespace hdgi {

/// Nodal P1 basis on the reference triangle (0,0),(1,0),(0,1) or Q1 basis on
/// the reference square [-1,1]^2, nodes counter-clockwise from (-1,-1).
struct BasisValues {
  int count = 0;
  std::array<double, 4> value{};
  std::array<Vec2, 4> grad{};
};

BasisValues basis_eval(ElementKind kind, const Vec2& ref);
/// Reference Hessians; zero for P1, only the mixed derivative survives for Q1.
std::array<Eigen::Matrix2d, 4> basis_hessians(ElementKind kind);
std::span<const Vec2> reference_vertices(ElementKind kind);

/// Pointwise H2-seminorm inner product: sum over multi-indices |a| = 2, so
/// the mixed derivative counts once.
inline double hessian_inner(const Eigen::Matrix2d& a, const Eigen::Matrix2d& b) {
  return a(0, 0) * b(0, 0) + a(0, 1) * b(0, 1) + a(1, 1) * b(1, 1);
}

enum class QuadDomain { edge, triangle, rectangle };

/// Edge rules live on [-1,1] (only the x coordinate is used), rectangle rules
/// on [-1,1]^2, triangle rules on the unit reference triangle.
struct QuadratureRule {
  std::vector<Vec2> points;
  std::vector<double> weights;
  int degree = 0;

  [[nodiscard]] std::size_t size() const { return weights.size(); }
};

/// Rule exact for polynomials of total degree <= `degree` (max 9).
QuadratureRule quad_rule(QuadDomain domain, int degree);

/// Cached edge rule on [-1,1].
const QuadratureRule& edge_rule(int degree);

/// Gauss-Legendre nodes and weights on [-1,1].
void gauss_legendre(int npoints, std::vector<double>& nodes, std::vector<double>& weights);

/// Map from the reference element onto a physical element. Rectangles are
/// mapped bilinearly; the Hessian accessor assumes a parallelogram.
class ElementMap {
public:
  ElementMap(ElementKind kind, std::span<const Vec2> vertices);

  struct Sample {
    Vec2 x;
    double det = 0.0;
    BasisValues basis;  ///< gradients already in physical coordinates
  };

  [[nodiscard]] ElementKind kind() const { return kind_; }
  [[nodiscard]] int nodes() const { return kind_ == ElementKind::triangle ? 3 : 4; }
  [[nodiscard]] Vec2 to_physical(const Vec2& ref) const;
  [[nodiscard]] Eigen::Matrix2d jacobian(const Vec2& ref) const;
  [[nodiscard]] Vec2 to_reference(const Vec2& x) const;
  [[nodiscard]] Sample sample(const Vec2& ref) const;
  [[nodiscard]] std::array<Eigen::Matrix2d, 4> physical_hessians() const;
  [[nodiscard]] const QuadratureRule& element_rule(int degree) const;

private:
  ElementKind kind_;
  std::array<Vec2, 4> v_{};
};

/// Reference point on local edge `local_edge` at arc fraction t in [0,1],
/// measured from local vertex `local_edge` towards the next vertex.
Vec2 reference_edge_point(ElementKind kind, int local_edge, double t);

/// Quadrature sample on local edge i of a mesh element, with the two
/// linear trace basis functions ordered by the global edge's vertices.
struct EdgePoint {
  double weight = 0.0;  ///< includes the arc-length factor
  ElementMap::Sample sample;
  std::array<double, 2> trace{};
};

ElementMap element_map(const Mesh& mesh, int element);
std::vector<EdgePoint> edge_points(const Mesh& mesh, const ElementMap& map, int element,
                                   int local_edge, int degree);

}  // namespace hdgi
