#include <cmath>
#include <set>
#include <sstream>

#include <gtest/gtest.h>

#include "hdgi/error.hpp"
#include "hdgi/mesh.hpp"

using namespace hdgi;

namespace {

double total_area(const Mesh& mesh) {
  double a = 0.0;
  for (std::size_t k = 0; k < mesh.elements.size(); ++k) a += element_area(mesh, static_cast<int>(k));
  return a;
}

}  // namespace

TEST(Mesh, CountsRectanglesN2) {
  const auto mesh = build_mesh(strip_geometry(0.5), 2, ElementKind::rectangle);
  EXPECT_EQ(mesh.elements.size(), 4u);
  EXPECT_EQ(mesh.edges.size(), 12u);
  EXPECT_EQ(mesh.count(EdgeClass::interface), 2u);
  EXPECT_EQ(mesh.count(EdgeClass::boundary), 8u);
  EXPECT_EQ(mesh.count(EdgeClass::interior), 2u);
}

TEST(Mesh, CountsTrianglesN2) {
  const auto mesh = build_mesh(strip_geometry(0.5), 2, ElementKind::triangle);
  EXPECT_EQ(mesh.elements.size(), 8u);
  EXPECT_EQ(mesh.edges.size(), 16u);
  EXPECT_EQ(mesh.count(EdgeClass::interface), 2u);
  EXPECT_EQ(mesh.count(EdgeClass::boundary), 8u);
}

TEST(Mesh, EulerRelationHolds) {
  for (auto kind : {ElementKind::rectangle, ElementKind::triangle})
    for (int n : {2, 4, 8}) {
      const auto mesh = build_mesh(staircase_geometry(), n == 2 ? 4 : n, kind);
      const long v = static_cast<long>(mesh.vertices.size());
      const long e = static_cast<long>(mesh.edges.size());
      const long f = static_cast<long>(mesh.elements.size());
      EXPECT_EQ(v - e + f, 1);
    }
}

TEST(Mesh, MisalignedInterfaceThrows) {
  try {
    build_mesh(strip_geometry(1.0 / 3.0), 2, ElementKind::rectangle);
    FAIL() << "expected AlignmentError";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::alignment);
  }
  EXPECT_NO_THROW(build_mesh(strip_geometry(1.0 / 3.0), 3, ElementKind::rectangle));
}

TEST(Mesh, StaircaseNeedsMultipleOfFour) {
  EXPECT_THROW(build_mesh(staircase_geometry(), 2, ElementKind::rectangle), Error);
  EXPECT_THROW(build_mesh(staircase_geometry(), 6, ElementKind::triangle), Error);
  EXPECT_NO_THROW(build_mesh(staircase_geometry(), 8, ElementKind::triangle));
}

TEST(Mesh, TooCoarseThrows) {
  try {
    build_mesh(strip_geometry(0.5), 1, ElementKind::rectangle);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::invalid_param);
  }
}

TEST(Mesh, DiameterAndRefinement) {
  const auto m4 = build_mesh(strip_geometry(0.5), 4, ElementKind::rectangle);
  const auto m8 = build_mesh(strip_geometry(0.5), 8, ElementKind::rectangle);
  EXPECT_NEAR(mesh_metrics(m4).h, std::sqrt(2.0) / 4.0, 1e-14);
  EXPECT_NEAR(mesh_metrics(m8).h, 0.5 * mesh_metrics(m4).h, 1e-14);
  EXPECT_NEAR(mesh_metrics(m8).nu1, mesh_metrics(m4).nu1, 1e-12);

  const auto t4 = build_mesh(strip_geometry(0.5), 4, ElementKind::triangle);
  const auto t8 = build_mesh(strip_geometry(0.5), 8, ElementKind::triangle);
  EXPECT_NEAR(mesh_metrics(t8).nu1, mesh_metrics(t4).nu1, 1e-12);
  EXPECT_NEAR(mesh_metrics(t8).min_rho, 0.5 * mesh_metrics(t4).min_rho, 1e-14);
}

TEST(Mesh, AreaSumsToOne) {
  for (auto kind : {ElementKind::rectangle, ElementKind::triangle}) {
    EXPECT_NEAR(total_area(build_mesh(strip_geometry(0.5), 8, kind)), 1.0, 1e-12);
    EXPECT_NEAR(total_area(build_mesh(staircase_geometry(), 12, kind)), 1.0, 1e-12);
  }
}

TEST(Mesh, EdgeClassesPartitionAndInterfaceLength) {
  for (auto kind : {ElementKind::rectangle, ElementKind::triangle})
    for (const auto& geom : {strip_geometry(0.5), staircase_geometry()}) {
      const auto mesh = build_mesh(geom, 8, kind);
      EXPECT_EQ(mesh.count(EdgeClass::interior) + mesh.count(EdgeClass::interface) +
                    mesh.count(EdgeClass::boundary),
                mesh.edges.size());
      double gamma = 0.0;
      for (const auto& e : mesh.edges)
        if (e.cls == EdgeClass::interface) gamma += e.length;
      EXPECT_NEAR(gamma, geom.interface_length(), 1e-12);
    }
}

TEST(Mesh, InterfaceEdgesOrientedFromSubdomainOne) {
  const auto mesh = build_mesh(staircase_geometry(), 8, ElementKind::triangle);
  for (const auto& e : mesh.edges) {
    if (e.cls != EdgeClass::interface) continue;
    ASSERT_EQ(mesh.elements[e.elements[0]].subdomain, 1);
    ASSERT_EQ(mesh.elements[e.elements[1]].subdomain, 2);
    const Vec2 mid = 0.5 * (mesh.vertices[e.vertices[0]] + mesh.vertices[e.vertices[1]]);
    // n1 points from the subdomain-1 centroid across the edge.
    EXPECT_GT((mid - mesh.centroid(e.elements[0])).dot(e.normal), 0.0);
    EXPECT_NEAR(e.normal.norm(), 1.0, 1e-14);
  }
}

TEST(Mesh, EdgeSignsMatchOutwardNormals) {
  const auto mesh = build_mesh(strip_geometry(0.5), 4, ElementKind::triangle);
  for (std::size_t k = 0; k < mesh.elements.size(); ++k) {
    const auto& el = mesh.elements[k];
    for (int i = 0; i < el.num_vertices; ++i) {
      const auto& e = mesh.edges[el.edges[i]];
      const Vec2 mid = 0.5 * (mesh.vertices[e.vertices[0]] + mesh.vertices[e.vertices[1]]);
      const double s = (mid - mesh.centroid(static_cast<int>(k))).dot(e.normal);
      EXPECT_EQ(s > 0 ? 1 : -1, el.edge_sign[i]);
    }
  }
}

TEST(Mesh, SubdomainsFollowGeometry) {
  const auto geom = staircase_geometry();
  const auto mesh = build_mesh(geom, 8, ElementKind::rectangle);
  for (std::size_t k = 0; k < mesh.elements.size(); ++k)
    EXPECT_EQ(mesh.elements[k].subdomain, geom.subdomain_of(mesh.centroid(static_cast<int>(k))));
}

TEST(Mesh, LocateFindsContainingElement) {
  for (auto kind : {ElementKind::rectangle, ElementKind::triangle}) {
    const auto mesh = build_mesh(strip_geometry(0.5), 4, kind);
    for (std::size_t k = 0; k < mesh.elements.size(); ++k)
      EXPECT_EQ(mesh.locate(mesh.centroid(static_cast<int>(k))), static_cast<int>(k));
  }
}

TEST(Mesh, NestedRefinement) {
  const auto coarse = build_mesh(strip_geometry(0.5), 4, ElementKind::triangle);
  EXPECT_TRUE(is_refinement(build_mesh(strip_geometry(0.5), 8, ElementKind::triangle), coarse));
  EXPECT_FALSE(is_refinement(build_mesh(strip_geometry(0.5), 6, ElementKind::triangle), coarse));
}

TEST(Mesh, DumpHasSections) {
  const auto mesh = build_mesh(strip_geometry(0.5), 2, ElementKind::rectangle);
  std::ostringstream out;
  write_mesh(out, mesh);
  const auto s = out.str();
  EXPECT_NE(s.find("VERTICES 9"), std::string::npos);
  EXPECT_NE(s.find("ELEMENTS 4"), std::string::npos);
  EXPECT_NE(s.find("EDGES 12"), std::string::npos);
  EXPECT_NE(s.find("interface"), std::string::npos);
}
