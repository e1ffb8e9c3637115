#include "hdgi/problem.hpp"

#include <cmath>
#include <numbers>

#include "hdgi/error.hpp"

namespace hdgi {

namespace {

constexpr double pi = std::numbers::pi;

const ExactSolution& require(const std::optional<ExactSolution>& exact, const std::string& name) {
  if (!exact) throw Error(ErrorCode::missing_exact, "preset '" + name + "' has no exact solution");
  return *exact;
}

CoefficientField scalar_coefficient(double lambda1, double lambda2) {
  CoefficientField c;
  c.per_subdomain = {[lambda1](const Vec2&) -> Eigen::Matrix2d { return lambda1 * Eigen::Matrix2d::Identity(); },
                     [lambda2](const Vec2&) -> Eigen::Matrix2d { return lambda2 * Eigen::Matrix2d::Identity(); }};
  c.lambda_min = std::min(lambda1, lambda2);
  c.lambda_max = std::max(lambda1, lambda2);
  c.alpha = c.lambda_max;
  return c;
}

double sin_sin(const Vec2& x) { return std::sin(pi * x.x()) * std::sin(pi * x.y()); }

// A = 4I below, I above; f chosen so that u = +-sin(pi x) sin(pi y).
ProblemData trig_data(std::string name) {
  ProblemData d;
  d.name = std::move(name);
  d.coefficient = scalar_coefficient(4.0, 1.0);
  d.source = {[](const Vec2& x) { return 8.0 * pi * pi * sin_sin(x); },
              [](const Vec2& x) { return -2.0 * pi * pi * sin_sin(x); }};
  d.flux_jump = [](const Vec2&) { return 0.0; };
  d.boundary = {[](const Vec2&) { return 0.0; }, [](const Vec2&) { return 0.0; }};
  return d;
}

ExactSolution signed_sin_sin() {
  ExactSolution e;
  auto value = [](double sign) {
    return [sign](const Vec2& x) { return sign * sin_sin(x); };
  };
  auto gradient = [](double sign) {
    return [sign](const Vec2& x) {
      return Vec2(sign * pi * std::cos(pi * x.x()) * std::sin(pi * x.y()),
                  sign * pi * std::sin(pi * x.x()) * std::cos(pi * x.y()));
    };
  };
  auto hessian = [](double sign) {
    return [sign](const Vec2& x) -> Eigen::Matrix2d {
      const double s = sin_sin(x);
      const double c = std::cos(pi * x.x()) * std::cos(pi * x.y());
      Eigen::Matrix2d h;
      h << -s, c, c, -s;
      return sign * pi * pi * h;
    };
  };
  e.value = {value(1.0), value(-1.0)};
  e.gradient = {gradient(1.0), gradient(-1.0)};
  e.hessian = {hessian(1.0), hessian(-1.0)};
  return e;
}

Preset example1() {
  Preset p{geometry_by_name("example1"), trig_data("example1")};
  p.data.exact = signed_sin_sin();
  p.data.jump = [](const Vec2& x) { return 2.0 * std::sin(pi * x.x()); };
  p.data.regularity = 1.0;
  return p;
}

Preset example2() {
  Preset p{staircase_geometry(), trig_data("example2")};
  // Piecewise on the three staircase pieces: 2 sin(pi x) on the horizontal
  // runs, the constant 2 on the riser x = 1/2.
  p.data.jump = [](const Vec2& x) {
    if (std::abs(x.x() - 0.5) < 1e-14 && x.y() > 0.5 && x.y() < 0.75) return 2.0;
    return 2.0 * std::sin(pi * x.x());
  };
  p.data.regularity = 0.75;
  return p;
}

Preset patch() {
  Preset p{geometry_by_name("example1"), ProblemData{}};
  auto& d = p.data;
  d.name = "patch";
  d.coefficient = scalar_coefficient(1.0, 1.0);
  d.source = {[](const Vec2&) { return 0.0; }, [](const Vec2&) { return 0.0; }};
  d.jump = [](const Vec2&) { return -1.0; };
  d.flux_jump = [](const Vec2&) { return 0.0; };
  ExactSolution e;
  e.value = {[](const Vec2& x) { return x.x(); }, [](const Vec2& x) { return x.x() + 1.0; }};
  e.gradient = {[](const Vec2&) { return Vec2(1.0, 0.0); }, [](const Vec2&) { return Vec2(1.0, 0.0); }};
  e.hessian = {[](const Vec2&) -> Eigen::Matrix2d { return Eigen::Matrix2d::Zero(); },
               [](const Vec2&) -> Eigen::Matrix2d { return Eigen::Matrix2d::Zero(); }};
  d.exact = e;
  d.boundary = e.value;
  d.regularity = 1.0;
  return p;
}

}  // namespace

double ProblemData::exact_value(const Vec2& x, int subdomain) const {
  return require(exact, name).value[subdomain - 1](x);
}

Vec2 ProblemData::exact_gradient(const Vec2& x, int subdomain) const {
  return require(exact, name).gradient[subdomain - 1](x);
}

Eigen::Matrix2d ProblemData::exact_hessian(const Vec2& x, int subdomain) const {
  return require(exact, name).hessian[subdomain - 1](x);
}

Preset preset(std::string_view name) {
  if (name == "example1") return example1();
  if (name == "example2") return example2();
  if (name == "patch") return patch();
  throw Error(ErrorCode::unknown_preset, "unknown preset '" + std::string(name) + "'");
}

}  // namespace hdgi
