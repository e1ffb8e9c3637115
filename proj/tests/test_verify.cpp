#include <cmath>

#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>

#include "hdgi/error.hpp"
#include "hdgi/fem.hpp"
#include "hdgi/verify.hpp"

using namespace hdgi;

namespace {

ProblemData scaled(ProblemData d, double c) {
  for (auto& a : d.coefficient.per_subdomain) {
    const auto base = a;
    a = [base, c](const Vec2& x) -> Eigen::Matrix2d { return c * base(x); };
  }
  d.coefficient.lambda_min *= c;
  d.coefficient.lambda_max *= c;
  return d;
}

}  // namespace

TEST(Verify, CoercivePositiveAtDefaultPenalty) {
  for (const char* name : {"example1", "example2"})
    for (auto kind : {ElementKind::rectangle, ElementKind::triangle}) {
      const auto p = preset(name);
      const auto mesh = build_mesh(p.geometry, 4, kind);
      const auto r = coercivity_min_eig(mesh, p.data, default_penalty(p.data));
      EXPECT_GT(r.min_eig, 0.0) << r.mesh_id;
      EXPECT_EQ(r.mesh_id, std::string(name) + (kind == ElementKind::rectangle ? "-q1" : "-p1") + "-n4");
    }
}

TEST(Verify, SweepLosesDefinitenessAndIsMonotoneAfterwards) {
  const auto p = preset("example1");
  const auto mesh = build_mesh(p.geometry, 2, ElementKind::rectangle);
  std::vector<double> eig;
  for (double eta : {0.01, 0.1, 1.0, 10.0, 100.0}) eig.push_back(coercivity_min_eig(mesh, p.data, eta).min_eig);
  EXPECT_LE(eig.front(), 0.0);
  EXPECT_GT(eig.back(), 0.0);
  bool positive = false;
  for (std::size_t i = 0; i < eig.size(); ++i) {
    if (positive) EXPECT_GE(eig[i], eig[i - 1] - 1e-12);
    positive = positive || eig[i] > 0.0;
  }
}

// N depends on eta, so the homogeneity is checked on B with the norm fixed.
TEST(Verify, HomogeneityInCoefficientAndPenalty) {
  const auto p = preset("example1");
  const auto mesh = build_mesh(p.geometry, 2, ElementKind::triangle);
  const double c = 3.0;
  const auto B = bilinear_matrix(mesh, p.data, SchemeParams::uniform(mesh, 40.0));
  const auto Bc = bilinear_matrix(mesh, scaled(p.data, c), SchemeParams::uniform(mesh, c * 40.0));
  EXPECT_LE((Bc - c * B).norm(), 1e-12 * Bc.norm());
  const double l = coercivity_min_eig(mesh, p.data, 40.0, 40.0);
  const double lc = coercivity_min_eig(mesh, scaled(p.data, c), c * 40.0, 40.0);
  EXPECT_NEAR(lc, c * l, 1e-9 * std::abs(lc));
}

TEST(Verify, EtaStarReproducibleAndMeshRobust) {
  const auto p = preset("example1");
  const auto m2 = build_mesh(p.geometry, 2, ElementKind::rectangle);
  const auto a = eta_star_estimate(m2, p.data);
  const auto b = eta_star_estimate(m2, p.data);
  ASSERT_TRUE(a.sign_change);
  EXPECT_NEAR(a.eta, b.eta, 1e-3 * a.eta);
  EXPECT_LE(coercivity_min_eig(m2, p.data, 0.99 * a.eta).min_eig, 0.0);
  EXPECT_GT(coercivity_min_eig(m2, p.data, 1.01 * a.eta).min_eig, 0.0);
  const auto c = eta_star_estimate(build_mesh(p.geometry, 4, ElementKind::rectangle), p.data);
  EXPECT_LT(std::abs(c.eta - a.eta) / a.eta, 0.5);
}

TEST(Verify, EtaStarFiniteForBothElementKinds) {
  const auto p = preset("patch");  // A = I
  for (auto kind : {ElementKind::rectangle, ElementKind::triangle}) {
    const auto t = eta_star_estimate(build_mesh(p.geometry, 2, kind), p.data);
    EXPECT_TRUE(std::isfinite(t.eta));
    EXPECT_GE(t.eta, 0.0);
  }
}

TEST(Verify, NormEquivalence) {
  for (auto kind : {ElementKind::rectangle, ElementKind::triangle}) {
    const auto mesh = build_mesh(strip_geometry(0.5), 2, kind);
    const double c0 = norm_equivalence_constant(mesh, 40.0);
    EXPECT_GE(c0, 1.0 - 1e-12);
    EXPECT_TRUE(std::isfinite(c0));
    if (kind == ElementKind::triangle) EXPECT_NEAR(c0, 1.0, 1e-10);
  }
}

TEST(Verify, BoundednessStableUnderRefinement) {
  const auto p = preset("example1");
  const double a = boundedness_max_eig(build_mesh(p.geometry, 2, ElementKind::rectangle), p.data, 40.0);
  const double b = boundedness_max_eig(build_mesh(p.geometry, 4, ElementKind::rectangle), p.data, 40.0);
  EXPECT_TRUE(std::isfinite(a));
  EXPECT_LT(std::max(a, b) / std::min(a, b), 2.0);
}

TEST(Verify, AsymmetricPencilRejected) {
  Eigen::MatrixXd a{{1, 2}, {0, 1}};
  try {
    pencil_extremes(a, Eigen::MatrixXd::Identity(2, 2));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::asymmetric_matrix);
  }
}

TEST(Verify, ProbesAreScaleInvariant) {
  for (auto kind : {ElementKind::rectangle, ElementKind::triangle})
    for (auto which : {Inequality::inverse, Inequality::trace0, Inequality::trace1}) {
      const double a = inequality_probe(build_mesh(strip_geometry(0.5), 2, kind), 0, which);
      const double b = inequality_probe(build_mesh(strip_geometry(0.5), 8, kind), 0, which);
      EXPECT_GT(a, 0.0);
      EXPECT_NEAR(a, b, 1e-10 * a);
    }
}

TEST(Verify, ConstantHasZeroInverseQuotient) {
  // The largest quotient is attained away from constants: the stiffness
  // matrix annihilates the constant vector exactly.
  const auto mesh = build_mesh(strip_geometry(0.5), 2, ElementKind::rectangle);
  const ElementMap map = element_map(mesh, 0);
  const auto& rule = map.element_rule(4);
  Eigen::Vector4d grad_sum = Eigen::Vector4d::Zero();
  for (std::size_t q = 0; q < rule.size(); ++q) {
    const auto s = map.sample(rule.points[q]);
    Vec2 g = Vec2::Zero();
    for (int i = 0; i < 4; ++i) g += s.basis.grad[i];
    grad_sum(0) += rule.weights[q] * s.det * g.squaredNorm();
  }
  EXPECT_NEAR(grad_sum(0), 0.0, 1e-28);
}

// Unit right triangle: mass (1/24)[2 1 1;1 2 1;1 1 2], stiffness from the
// gradient formula, inverse constant = h_K^2 * lambda_max(K, M).
TEST(Verify, UnitTriangleInverseConstant) {
  Eigen::Matrix3d M{{2, 1, 1}, {1, 2, 1}, {1, 1, 2}};
  M /= 24.0;
  Eigen::Matrix3d K{{1, -0.5, -0.5}, {-0.5, 0.5, 0}, {-0.5, 0, 0.5}};
  const Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::Matrix3d> es(K, M);
  const double expected = 2.0 * es.eigenvalues().maxCoeff();  // h_K^2 = 2
  // Mesh triangles are congruent to the unit right triangle up to scaling.
  const auto mesh = build_mesh(strip_geometry(0.5), 2, ElementKind::triangle);
  EXPECT_NEAR(inequality_probe(mesh, 0, Inequality::inverse), expected, 1e-10 * expected);
  EXPECT_NEAR(inequality_probe(mesh, 1, Inequality::inverse), expected, 1e-10 * expected);
}

TEST(Verify, CsvFormat) {
  std::vector<CoercivityReport> r{{"example1-q1-n2", 40.0, 0.5}, {"example1-q1-n2", 0.01, -12.25}};
  EXPECT_EQ(to_csv(r), "mesh,eta,min_eig\nexample1-q1-n2,40,0.5\nexample1-q1-n2,0.01,-12.25\n");
}
