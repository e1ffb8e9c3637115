#include <gtest/gtest.h>
#include <omp.h>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include "hdgi/error.hpp"
#include "hdgi/solver.hpp"

using namespace hdgi;

namespace {

ProblemData zero_data(ProblemData d) {
  auto zero = [](const Vec2&) { return 0.0; };
  d.source = {zero, zero};
  d.jump = zero;
  d.flux_jump = zero;
  d.boundary = {zero, zero};
  return d;
}

double rel_diff(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  return (a - b).lpNorm<Eigen::Infinity>() / std::max(b.lpNorm<Eigen::Infinity>(), 1e-300);
}

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no hdgi::Error thrown";
  return ErrorCode::invalid_param;
}

}  // namespace

// Oracle: the dense Schur complement of the assembled full system.
TEST(Solver, CondensedMatchesDenseSchurComplement) {
  const auto p = preset("example1");
  const auto mesh = build_mesh(p.geometry, 2, ElementKind::rectangle);
  const auto params = SchemeParams::uniform(mesh, 40.0);
  const auto locals = local_systems(mesh, p.data, params);
  const auto cond = condense(mesh, locals, boundary_traces(mesh, p.data));
  ASSERT_EQ(cond.dim(), 8);

  const auto full = assemble(mesh, p.data, params);
  const Eigen::MatrixXd A(full.matrix);
  const int nu = full.dofs.num_element_dofs();
  const int nt = full.dofs.num_trace_dofs();
  const Eigen::MatrixXd Auu = A.topLeftCorner(nu, nu);
  const Eigen::MatrixXd Aut = A.topRightCorner(nu, nt);
  const Eigen::PartialPivLU<Eigen::MatrixXd> lu(Auu);
  const Eigen::MatrixXd S = A.bottomRightCorner(nt, nt) - Aut.transpose() * lu.solve(Aut);
  const Eigen::VectorXd g = full.load.tail(nt) - Aut.transpose() * lu.solve(full.load.head(nu));
  EXPECT_LE((Eigen::MatrixXd(cond.schur) - S).norm(), 1e-12 * S.norm());
  EXPECT_LE((cond.load - g).norm(), 1e-12 * g.norm());
}

TEST(Solver, ZeroDataGivesZeroSolution) {
  const auto p = preset("example1");
  const auto mesh = build_mesh(p.geometry, 4, ElementKind::triangle);
  const auto data = zero_data(p.data);
  for (auto method : {SolverMethod::direct, SolverMethod::cg}) {
    const auto r = solve_problem(mesh, data, SchemeParams::uniform(mesh, 40.0), method);
    EXPECT_EQ(r.solution.element.lpNorm<Eigen::Infinity>(), 0.0);
    EXPECT_EQ(r.solution.trace.lpNorm<Eigen::Infinity>(), 0.0);
  }
}

TEST(Solver, DimensionsAndAdvantage) {
  const auto p = preset("example1");
  for (auto kind : {ElementKind::rectangle, ElementKind::triangle})
    for (int n : {2, 4, 8}) {
      const auto mesh = build_mesh(p.geometry, n, kind);
      const auto r = solve_problem(mesh, p.data, SchemeParams::uniform(mesh, 40.0));
      const auto interior = mesh.count(EdgeClass::interior) + mesh.count(EdgeClass::interface);
      EXPECT_EQ(r.condensed_dim, static_cast<int>(2 * interior));
      EXPECT_LT(r.condensed_dim, r.full_dim);
    }
}

TEST(Solver, SchurPositiveDefiniteAtDefaultPenalty) {
  const auto p = preset("example1");
  const auto mesh = build_mesh(p.geometry, 4, ElementKind::rectangle);
  const auto locals = local_systems(mesh, p.data, SchemeParams::uniform(mesh, default_penalty(p.data)));
  const auto cond = condense(mesh, locals, boundary_traces(mesh, p.data));
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig{Eigen::MatrixXd(cond.schur)};
  EXPECT_GT(eig.eigenvalues().minCoeff(), 0.0);
}

TEST(Solver, DirectResidual) {
  const auto p = preset("example2");
  const auto mesh = build_mesh(p.geometry, 16, ElementKind::rectangle);
  const auto r = solve_problem(mesh, p.data, SchemeParams::uniform(mesh, 40.0));
  EXPECT_LE(r.relative_residual, 1e-10);
}

TEST(Solver, CgAgreesWithDirect) {
  const auto p = preset("example1");
  for (auto kind : {ElementKind::rectangle, ElementKind::triangle}) {
    const auto mesh = build_mesh(p.geometry, 8, kind);
    const auto params = SchemeParams::uniform(mesh, 40.0);
    const auto d = solve_problem(mesh, p.data, params, SolverMethod::direct);
    const auto c = solve_problem(mesh, p.data, params, SolverMethod::cg, 1e-12);
    EXPECT_GT(c.iterations, 0);
    EXPECT_LE(c.relative_residual, 1e-12);
    EXPECT_LE((c.solution.trace - d.solution.trace).lpNorm<Eigen::Infinity>(), 1e-9);
    EXPECT_LE((c.solution.element - d.solution.element).lpNorm<Eigen::Infinity>(), 1e-9);
  }
}

TEST(Solver, MonolithicAgreesWithCondensed) {
  for (const char* name : {"example1", "example2", "patch"})
    for (auto kind : {ElementKind::rectangle, ElementKind::triangle})
      for (int n : {4, 8}) {
        const auto p = preset(name);
        const auto mesh = build_mesh(p.geometry, n, kind);
        const auto params = SchemeParams::uniform(mesh, default_penalty(p.data));
        const auto cond = solve_problem(mesh, p.data, params).solution;
        const auto mono = solve_monolithic(mesh, assemble(mesh, p.data, params));
        EXPECT_LE(rel_diff(cond.element, mono.element), 1e-9) << name << ' ' << n;
        EXPECT_LE(rel_diff(cond.trace, mono.trace), 1e-9) << name << ' ' << n;
      }
}

TEST(Solver, PatchReproducesExactTraces) {
  const auto p = preset("patch");
  for (auto scheme : {Scheme::primary, Scheme::alternative})
    for (auto kind : {ElementKind::rectangle, ElementKind::triangle}) {
      const auto mesh = build_mesh(p.geometry, 4, kind);
      const auto r = solve_problem(mesh, p.data, SchemeParams::uniform(mesh, 10.0, scheme));
      const auto exact = interpolate_exact(mesh, p.data, scheme);
      EXPECT_LE((r.solution.element - exact.element).lpNorm<Eigen::Infinity>(), 1e-10);
      EXPECT_LE((r.solution.trace - exact.trace).lpNorm<Eigen::Infinity>(), 1e-10);
    }
}

TEST(Solver, TinyPenaltyIsNotPositiveDefinite) {
  const auto p = preset("example1");
  const auto mesh = build_mesh(p.geometry, 16, ElementKind::rectangle);
  EXPECT_EQ(code_of([&] { solve_problem(mesh, p.data, SchemeParams::uniform(mesh, 1e-6)); }),
            ErrorCode::not_positive_definite);
}

TEST(Solver, SingularLocalBlockNamesElement) {
  // With A = 4I the Q1 interior block has an exact null mode at eta = 8.
  const auto p = preset("example1");
  const auto mesh = build_mesh(p.geometry, 4, ElementKind::rectangle);
  try {
    solve_problem(mesh, p.data, SchemeParams::uniform(mesh, 8.0));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::singular_local_block);
    EXPECT_NE(std::string(e.what()).find("element"), std::string::npos);
  }
}

TEST(Solver, CgErrors) {
  SparseMatrix neg(3, 3);
  neg.setIdentity();
  neg *= -1.0;
  EXPECT_EQ(code_of([&] { conjugate_gradient(neg, Eigen::VectorXd::Ones(3), 1e-12, 30); }),
            ErrorCode::not_positive_definite);

  SparseMatrix spd(50, 50);
  for (int i = 0; i < 50; ++i) spd.insert(i, i) = 1.0 + i * i;
  for (int i = 0; i + 1 < 50; ++i) {
    spd.insert(i, i + 1) = 0.5;
    spd.insert(i + 1, i) = 0.5;
  }
  EXPECT_EQ(code_of([&] { conjugate_gradient(spd, Eigen::VectorXd::Ones(50), 1e-15, 1); }),
            ErrorCode::no_convergence);
  const auto rep = conjugate_gradient(spd, Eigen::VectorXd::Ones(50), 1e-12, 500);
  EXPECT_LE((spd * rep.trace - Eigen::VectorXd::Ones(50)).norm(), 1e-11 * std::sqrt(50.0));
}

TEST(Solver, SerialAndParallelBitwiseEqual) {
  omp_set_num_threads(4);
  const auto p = preset("example2");
  const auto mesh = build_mesh(p.geometry, 16, ElementKind::triangle);
  const auto params = SchemeParams::uniform(mesh, 40.0);
  for (auto method : {SolverMethod::direct, SolverMethod::cg}) {
    const auto a = solve_problem(mesh, p.data, params, method, 1e-12, Exec::serial);
    const auto b = solve_problem(mesh, p.data, params, method, 1e-12, Exec::parallel);
    EXPECT_EQ(a.iterations, b.iterations);
    EXPECT_TRUE((a.solution.element.array() == b.solution.element.array()).all());
    EXPECT_TRUE((a.solution.trace.array() == b.solution.trace.array()).all());
  }
}
