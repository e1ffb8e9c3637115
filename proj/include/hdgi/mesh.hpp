#pragma once

#include <array>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

namespace hdgi {

using Vec2 = Eigen::Vector2d;

enum class ElementKind { triangle, rectangle };
enum class EdgeClass { interior, interface, boundary };

std::string_view to_string(ElementKind kind);
std::string_view to_string(EdgeClass cls);

/// Axis-aligned box [x0,x1] x [y0,y1].
struct Box {
  double x0, y0, x1, y1;
  [[nodiscard]] bool contains(const Vec2& p) const {
    return p.x() > x0 && p.x() < x1 && p.y() > y0 && p.y() < y1;
  }
};

struct Segment {
  Vec2 a, b;
  [[nodiscard]] double length() const { return (b - a).norm(); }
  [[nodiscard]] bool contains(const Vec2& p, double tol = 1e-12) const;
};

/// Two-subdomain partition of the unit square. Subdomain 1 is the union of
/// `subdomain1`; everything else is subdomain 2. The interface is the set of
/// segments separating them, all axis-aligned.
struct Geometry {
  std::string name;
  std::vector<Box> subdomain1;
  std::vector<Segment> interface;

  [[nodiscard]] int subdomain_of(const Vec2& p) const;
  [[nodiscard]] double interface_length() const;
  /// Coordinates every mesh must resolve for the interface to lie on mesh lines.
  [[nodiscard]] std::vector<double> breakpoints() const;
};

/// Omega_1 = (0,1) x (0,y_interface), Omega_2 the strip above.
Geometry strip_geometry(double y_interface);
/// Staircase interface y=1/2 (x<1/2), x=1/2 (1/2<y<3/4), y=3/4 (x>1/2).
Geometry staircase_geometry();
/// "example1" or "example2"; throws UnknownPreset otherwise.
Geometry geometry_by_name(std::string_view name);

struct Element {
  std::array<int, 4> vertices{-1, -1, -1, -1};
  std::array<int, 4> edges{-1, -1, -1, -1};
  /// +1 where the element's outward normal equals the stored edge normal.
  std::array<int, 4> edge_sign{0, 0, 0, 0};
  int num_vertices = 0;
  int subdomain = 0;

  [[nodiscard]] std::span<const int> vertex_ids() const {
    return {vertices.data(), static_cast<std::size_t>(num_vertices)};
  }
  [[nodiscard]] std::span<const int> edge_ids() const {
    return {edges.data(), static_cast<std::size_t>(num_vertices)};
  }
};

/// Local edge i of an element runs from its vertex i to vertex (i+1) mod m.
struct Edge {
  std::array<int, 2> vertices{-1, -1};
  /// On interface edges the subdomain-1 element comes first. Boundary edges
  /// have a single element and elements[1] == -1.
  std::array<int, 2> elements{-1, -1};
  std::array<int, 2> local_index{-1, -1};
  EdgeClass cls = EdgeClass::interior;
  double length = 0.0;
  /// Outward normal of elements[0]; on interface edges this is n_1.
  Vec2 normal = Vec2::Zero();
};

struct Mesh {
  ElementKind kind = ElementKind::rectangle;
  Geometry geometry;
  int n = 0;  ///< cells per unit length
  std::vector<Vec2> vertices;
  std::vector<Element> elements;
  std::vector<Edge> edges;

  [[nodiscard]] int nodes_per_element() const { return kind == ElementKind::triangle ? 3 : 4; }
  [[nodiscard]] double spacing() const { return 1.0 / n; }
  [[nodiscard]] std::vector<Vec2> element_vertices(int element) const;
  [[nodiscard]] Vec2 centroid(int element) const;
  /// Element containing p (closed cells; ties resolved towards lower index).
  [[nodiscard]] int locate(const Vec2& p) const;
  [[nodiscard]] std::size_t count(EdgeClass cls) const;
};

/// Uniform interface-aligned mesh with n cells per unit length. Triangles
/// split every cell along its (0,0)-(1,1) diagonal so 2n refines n.
Mesh build_mesh(const Geometry& geometry, int n, ElementKind kind);

struct MeshMetrics {
  double h;          ///< max element diameter
  double min_rho;    ///< min inscribed-circle diameter
  double nu1;        ///< max over (K,e) of max(h_e/rho_K, h_K/h_e)
};

MeshMetrics mesh_metrics(const Mesh& mesh);
double element_diameter(const Mesh& mesh, int element);
double element_inscribed_diameter(const Mesh& mesh, int element);
double element_area(const Mesh& mesh, int element);

/// True when every element of `fine` lies inside one element of `coarse`.
bool is_refinement(const Mesh& fine, const Mesh& coarse);

/// Plain-text dump with VERTICES, ELEMENTS and EDGES sections, 0-based ids.
void write_mesh(std::ostream& out, const Mesh& mesh);

}  // namespace hdgi
