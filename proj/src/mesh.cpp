#include "hdgi/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iomanip>
#include <limits>
#include <ostream>
#include <unordered_map>

#include "hdgi/error.hpp"

namespace hdgi {

std::string_view to_string(ElementKind kind) {
  return kind == ElementKind::triangle ? "triangle" : "rectangle";
}

std::string_view to_string(EdgeClass cls) {
  switch (cls) {
    case EdgeClass::interior: return "interior";
    case EdgeClass::interface: return "interface";
    case EdgeClass::boundary: return "boundary";
  }
  return "?";
}

bool Segment::contains(const Vec2& p, double tol) const {
  const Vec2 d = b - a;
  const double len2 = d.squaredNorm();
  const double t = (p - a).dot(d) / len2;
  if (t < -tol || t > 1.0 + tol) return false;
  return (a + t * d - p).norm() <= tol * std::sqrt(len2);
}

int Geometry::subdomain_of(const Vec2& p) const {
  for (const auto& box : subdomain1)
    if (box.contains(p)) return 1;
  return 2;
}

double Geometry::interface_length() const {
  double total = 0.0;
  for (const auto& s : interface) total += s.length();
  return total;
}

std::vector<double> Geometry::breakpoints() const {
  std::vector<double> out;
  for (const auto& b : subdomain1) out.insert(out.end(), {b.x0, b.y0, b.x1, b.y1});
  for (const auto& s : interface) out.insert(out.end(), {s.a.x(), s.a.y(), s.b.x(), s.b.y()});
  return out;
}

Geometry strip_geometry(double y_interface) {
  Geometry g;
  g.name = "strip";
  g.subdomain1 = {{0.0, 0.0, 1.0, y_interface}};
  g.interface = {{Vec2(0.0, y_interface), Vec2(1.0, y_interface)}};
  return g;
}

Geometry staircase_geometry() {
  Geometry g;
  g.name = "example2";
  g.subdomain1 = {{0.0, 0.0, 0.5, 0.5}, {0.5, 0.0, 1.0, 0.75}};
  g.interface = {{Vec2(0.0, 0.5), Vec2(0.5, 0.5)},
                 {Vec2(0.5, 0.5), Vec2(0.5, 0.75)},
                 {Vec2(0.5, 0.75), Vec2(1.0, 0.75)}};
  return g;
}

Geometry geometry_by_name(std::string_view name) {
  if (name == "example1") {
    Geometry g = strip_geometry(0.5);
    g.name = "example1";
    return g;
  }
  if (name == "example2") return staircase_geometry();
  throw Error(ErrorCode::unknown_preset, "no geometry named '" + std::string(name) + "'");
}

std::vector<Vec2> Mesh::element_vertices(int element) const {
  const auto& el = elements[element];
  std::vector<Vec2> out;
  out.reserve(el.num_vertices);
  for (int v : el.vertex_ids()) out.push_back(vertices[v]);
  return out;
}

Vec2 Mesh::centroid(int element) const {
  Vec2 c = Vec2::Zero();
  const auto& el = elements[element];
  for (int v : el.vertex_ids()) c += vertices[v];
  return c / el.num_vertices;
}

int Mesh::locate(const Vec2& p) const {
  const int i = std::clamp(static_cast<int>(std::floor(p.x() * n)), 0, n - 1);
  const int j = std::clamp(static_cast<int>(std::floor(p.y() * n)), 0, n - 1);
  const int cell = j * n + i;
  if (kind == ElementKind::rectangle) return cell;
  const double lx = p.x() * n - i;
  const double ly = p.y() * n - j;
  return 2 * cell + (ly > lx ? 1 : 0);
}

std::size_t Mesh::count(EdgeClass cls) const {
  return static_cast<std::size_t>(
      std::count_if(edges.begin(), edges.end(), [cls](const Edge& e) { return e.cls == cls; }));
}

namespace {

void check_alignment(const Geometry& geometry, int n) {
  for (double b : geometry.breakpoints()) {
    const double scaled = b * n;
    if (std::abs(scaled - std::round(scaled)) > 1e-9) {
      throw Error(ErrorCode::alignment, "interface coordinate " + std::to_string(b) +
                                            " is not on a mesh line for n=" + std::to_string(n));
    }
  }
}

Vec2 outward_normal(const Vec2& a, const Vec2& b) {
  const Vec2 t = b - a;
  return Vec2(t.y(), -t.x()).normalized();
}

// Union of interface edges must reproduce the geometric interface exactly.
void check_interface_resolved(const Mesh& mesh) {
  double length = 0.0;
  for (const auto& e : mesh.edges) {
    if (e.cls != EdgeClass::interface) continue;
    const Vec2 mid = 0.5 * (mesh.vertices[e.vertices[0]] + mesh.vertices[e.vertices[1]]);
    const bool on_gamma = std::any_of(mesh.geometry.interface.begin(), mesh.geometry.interface.end(),
                                      [&](const Segment& s) { return s.contains(mid); });
    if (!on_gamma) throw Error(ErrorCode::alignment, "interface edge off the geometric interface");
    length += e.length;
  }
  const double expected = mesh.geometry.interface_length();
  if (std::abs(length - expected) > 1e-12 * expected) {
    throw Error(ErrorCode::alignment, "interface edges do not cover the interface");
  }
}

}  // namespace

Mesh build_mesh(const Geometry& geometry, int n, ElementKind kind) {
  if (n < 2) throw Error(ErrorCode::invalid_param, "n must be >= 2, got " + std::to_string(n));
  check_alignment(geometry, n);

  Mesh mesh;
  mesh.kind = kind;
  mesh.geometry = geometry;
  mesh.n = n;

  const int nv = n + 1;
  mesh.vertices.reserve(static_cast<std::size_t>(nv) * nv);
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i) mesh.vertices.emplace_back(double(i) / n, double(j) / n);

  auto vid = [nv](int i, int j) { return j * nv + i; };
  auto add = [&](std::initializer_list<int> ids) {
    Element el;
    el.num_vertices = static_cast<int>(ids.size());
    std::copy(ids.begin(), ids.end(), el.vertices.begin());
    mesh.elements.push_back(el);
  };
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const int v00 = vid(i, j), v10 = vid(i + 1, j), v11 = vid(i + 1, j + 1), v01 = vid(i, j + 1);
      if (kind == ElementKind::rectangle) {
        add({v00, v10, v11, v01});
      } else {
        add({v00, v10, v11});
        add({v00, v11, v01});
      }
    }
  }

  for (std::size_t k = 0; k < mesh.elements.size(); ++k)
    mesh.elements[k].subdomain = geometry.subdomain_of(mesh.centroid(static_cast<int>(k)));

  std::unordered_map<std::int64_t, int> edge_index;
  for (std::size_t k = 0; k < mesh.elements.size(); ++k) {
    auto& el = mesh.elements[k];
    for (int i = 0; i < el.num_vertices; ++i) {
      const int a = el.vertices[i];
      const int b = el.vertices[(i + 1) % el.num_vertices];
      const std::int64_t key = std::int64_t(std::min(a, b)) * nv * nv + std::max(a, b);
      auto [it, inserted] = edge_index.try_emplace(key, static_cast<int>(mesh.edges.size()));
      if (inserted) {
        Edge e;
        e.vertices = {a, b};
        e.elements[0] = static_cast<int>(k);
        e.local_index[0] = i;
        e.length = (mesh.vertices[b] - mesh.vertices[a]).norm();
        e.normal = outward_normal(mesh.vertices[a], mesh.vertices[b]);
        mesh.edges.push_back(e);
      } else {
        auto& e = mesh.edges[it->second];
        e.elements[1] = static_cast<int>(k);
        e.local_index[1] = i;
      }
      el.edges[i] = it->second;
    }
  }

  for (auto& e : mesh.edges) {
    if (e.elements[1] < 0) {
      e.cls = EdgeClass::boundary;
    } else if (mesh.elements[e.elements[0]].subdomain != mesh.elements[e.elements[1]].subdomain) {
      e.cls = EdgeClass::interface;
      if (mesh.elements[e.elements[0]].subdomain != 1) {
        std::swap(e.elements[0], e.elements[1]);
        std::swap(e.local_index[0], e.local_index[1]);
        e.normal = -e.normal;
      }
    } else {
      e.cls = EdgeClass::interior;
    }
    mesh.elements[e.elements[0]].edge_sign[e.local_index[0]] = 1;
    if (e.elements[1] >= 0) mesh.elements[e.elements[1]].edge_sign[e.local_index[1]] = -1;
  }

  check_interface_resolved(mesh);
  return mesh;
}

double element_diameter(const Mesh& mesh, int element) {
  const auto pts = mesh.element_vertices(element);
  double d = 0.0;
  for (std::size_t a = 0; a < pts.size(); ++a)
    for (std::size_t b = a + 1; b < pts.size(); ++b) d = std::max(d, (pts[a] - pts[b]).norm());
  return d;
}

double element_area(const Mesh& mesh, int element) {
  const auto pts = mesh.element_vertices(element);
  double twice = 0.0;
  for (std::size_t a = 0; a < pts.size(); ++a) {
    const auto& p = pts[a];
    const auto& q = pts[(a + 1) % pts.size()];
    twice += p.x() * q.y() - q.x() * p.y();
  }
  return 0.5 * twice;
}

double element_inscribed_diameter(const Mesh& mesh, int element) {
  const auto pts = mesh.element_vertices(element);
  if (mesh.kind == ElementKind::rectangle)
    return std::min((pts[1] - pts[0]).norm(), (pts[3] - pts[0]).norm());
  double perimeter = 0.0;
  for (std::size_t a = 0; a < pts.size(); ++a) perimeter += (pts[(a + 1) % pts.size()] - pts[a]).norm();
  return 4.0 * element_area(mesh, element) / perimeter;
}

MeshMetrics mesh_metrics(const Mesh& mesh) {
  MeshMetrics m{0.0, std::numeric_limits<double>::infinity(), 0.0};
  for (std::size_t k = 0; k < mesh.elements.size(); ++k) {
    const int K = static_cast<int>(k);
    const double hK = element_diameter(mesh, K);
    const double rho = element_inscribed_diameter(mesh, K);
    m.h = std::max(m.h, hK);
    m.min_rho = std::min(m.min_rho, rho);
    for (int e : mesh.elements[k].edge_ids()) {
      const double he = mesh.edges[e].length;
      m.nu1 = std::max({m.nu1, he / rho, hK / he});
    }
  }
  return m;
}

namespace {

bool inside_convex(const std::vector<Vec2>& poly, const Vec2& p, double tol) {
  for (std::size_t a = 0; a < poly.size(); ++a) {
    const Vec2 t = poly[(a + 1) % poly.size()] - poly[a];
    const Vec2 r = p - poly[a];
    if (t.x() * r.y() - t.y() * r.x() < -tol) return false;
  }
  return true;
}

}  // namespace

bool is_refinement(const Mesh& fine, const Mesh& coarse) {
  if (fine.kind != coarse.kind || fine.geometry.name != coarse.geometry.name) return false;
  if (fine.n % coarse.n != 0) return false;
  const double tol = 1e-12 * coarse.spacing();
  for (std::size_t k = 0; k < fine.elements.size(); ++k) {
    const int K = static_cast<int>(k);
    const int parent = coarse.locate(fine.centroid(K));
    const auto poly = coarse.element_vertices(parent);
    for (const auto& v : fine.element_vertices(K))
      if (!inside_convex(poly, v, tol)) return false;
    if (coarse.elements[parent].subdomain != fine.elements[k].subdomain) return false;
  }
  return true;
}

void write_mesh(std::ostream& out, const Mesh& mesh) {
  const auto old_precision = out.precision(17);
  out << "VERTICES " << mesh.vertices.size() << '\n';
  for (std::size_t v = 0; v < mesh.vertices.size(); ++v)
    out << v << ' ' << mesh.vertices[v].x() << ' ' << mesh.vertices[v].y() << '\n';
  out << "ELEMENTS " << mesh.elements.size() << '\n';
  for (std::size_t k = 0; k < mesh.elements.size(); ++k) {
    const auto& el = mesh.elements[k];
    out << k << ' ' << to_string(mesh.kind) << ' ' << el.subdomain;
    for (int v : el.vertex_ids()) out << ' ' << v;
    out << '\n';
  }
  out << "EDGES " << mesh.edges.size() << '\n';
  for (std::size_t e = 0; e < mesh.edges.size(); ++e) {
    const auto& edge = mesh.edges[e];
    out << e << ' ' << edge.vertices[0] << ' ' << edge.vertices[1] << ' ' << to_string(edge.cls)
        << ' ' << edge.elements[0] << ' ' << edge.elements[1] << '\n';
  }
  out.precision(old_precision);
}

}  // namespace hdgi
