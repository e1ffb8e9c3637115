#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <string_view>

#include <Eigen/Core>

#include "hdgi/mesh.hpp"

namespace hdgi {

using ScalarField = std::function<double(const Vec2&)>;
using VectorField = std::function<Vec2(const Vec2&)>;
using MatrixField = std::function<Eigen::Matrix2d(const Vec2&)>;

/// Piecewise coefficient A, one symmetric matrix field per subdomain.
struct CoefficientField {
  std::array<MatrixField, 2> per_subdomain;
  double lambda_min = 1.0;
  double lambda_max = 1.0;
  double alpha = 1.0;  ///< sup of the operator norm of A

  [[nodiscard]] Eigen::Matrix2d operator()(const Vec2& x, int subdomain) const {
    return per_subdomain[subdomain - 1](x);
  }
};

struct ExactSolution {
  std::array<ScalarField, 2> value;
  std::array<VectorField, 2> gradient;
  std::array<MatrixField, 2> hessian;
};

/// PDE data for -div(A grad u) = f away from the interface, with
/// u|1 - u|2 = jump and (A grad u)|1.n1 + (A grad u)|2.n2 = flux_jump on it.
struct ProblemData {
  std::string name;
  CoefficientField coefficient;
  std::array<ScalarField, 2> source;
  ScalarField jump;        ///< g_D
  ScalarField flux_jump;   ///< g_N
  /// Trace of u on the outer boundary, per adjacent subdomain. Zero for the
  /// two examples; the patch test needs a nonzero linear trace.
  std::array<ScalarField, 2> boundary;
  std::optional<ExactSolution> exact;
  double regularity = 1.0;

  [[nodiscard]] Eigen::Matrix2d A(const Vec2& x, int subdomain) const { return coefficient(x, subdomain); }
  [[nodiscard]] double f(const Vec2& x, int subdomain) const { return source[subdomain - 1](x); }
  [[nodiscard]] double g_D(const Vec2& x) const { return jump(x); }
  [[nodiscard]] double g_N(const Vec2& x) const { return flux_jump(x); }
  [[nodiscard]] double boundary_value(const Vec2& x, int subdomain) const {
    return boundary[subdomain - 1](x);
  }
  /// Throws MissingExact when no closed-form solution is known.
  [[nodiscard]] double exact_value(const Vec2& x, int subdomain) const;
  [[nodiscard]] Vec2 exact_gradient(const Vec2& x, int subdomain) const;
  [[nodiscard]] Eigen::Matrix2d exact_hessian(const Vec2& x, int subdomain) const;
  [[nodiscard]] bool has_exact() const { return exact.has_value(); }
};

struct Preset {
  Geometry geometry;
  ProblemData data;
};

/// "example1", "example2" or "patch"; throws UnknownPreset otherwise.
Preset preset(std::string_view name);

}  // namespace hdgi
