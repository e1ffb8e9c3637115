#include "hdgi/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "hdgi/mesh.hpp"
#include "hdgi/norms.hpp"
#include "hdgi/problem.hpp"
#include "hdgi/verify.hpp"

namespace hdgi::cli {

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::alignment:
      return alignment_error;
    case ErrorCode::singular_local_block:
    case ErrorCode::not_positive_definite:
    case ErrorCode::no_convergence:
    case ErrorCode::asymmetric_matrix:
      return solver_failure;
    default:
      return config_error;
  }
}

std::optional<int> parse(int argc, const char* const* argv, RunConfig& config, std::ostream& out,
                         std::ostream& err) {
  CLI::App app{"Hybridized DG solver for elliptic interface problems", "hdgi"};
  app.require_subcommand(1);

  std::string element = "q1", scheme = "primary", solver = "direct";
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--preset", config.preset, "example1 | example2 | patch");
    sub->add_option("--element", element, "q1 | p1")->check(CLI::IsMember({"q1", "p1"}));
    sub->add_option("--scheme", scheme, "primary | alternative")
        ->check(CLI::IsMember({"primary", "alternative"}));
    sub->add_option("--eta", config.eta, "penalty (default 10*lambda_max)");
    sub->add_option("--solver", solver, "direct | cg")->check(CLI::IsMember({"direct", "cg"}));
    sub->add_option("--tol", config.tol, "CG relative residual tolerance");
    sub->add_option("--out", config.out, "output file");
  };
  auto* solve = app.add_subcommand("solve", "solve one problem and report errors");
  add_common(solve);
  solve->add_option("--n", config.n, "cells per unit length");
  auto* conv = app.add_subcommand("convergence", "error and rate table over nested levels");
  add_common(conv);
  conv->add_option("--levels", config.levels, "comma-separated n values")->delimiter(',');
  auto* verify = app.add_subcommand("verify", "coercivity and norm-equivalence certificates");
  add_common(verify);
  verify->add_option("--n", config.n, "cells per unit length");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? ok : config_error;
  }

  config.element = element == "p1" ? ElementKind::triangle : ElementKind::rectangle;
  config.scheme = scheme == "alternative" ? Scheme::alternative : Scheme::primary;
  config.solver = solver == "cg" ? SolverMethod::cg : SolverMethod::direct;
  if (solve->parsed()) config.command = Command::solve;
  if (conv->parsed()) config.command = Command::convergence;
  if (verify->parsed()) config.command = Command::verify;
  return std::nullopt;
}

namespace {

std::string num(double v, const char* format = "%.6g") {
  char buf[64];
  std::snprintf(buf, sizeof buf, format, v);
  return buf;
}

double penalty(const RunConfig& config, const ProblemData& data) {
  const double eta = config.eta.value_or(default_penalty(data));
  if (!(eta > 0.0)) throw Error(ErrorCode::invalid_param, "--eta must be positive");
  return eta;
}

// Writes `text` to --out when given, otherwise to `fallback`.
void emit(const RunConfig& config, const std::string& text, std::ostream& fallback) {
  if (!config.out) {
    fallback << text;
    return;
  }
  std::ofstream file(*config.out);
  if (!file) throw Error(ErrorCode::invalid_param, "cannot open " + *config.out);
  file << text;
}

}  // namespace

std::vector<int> resolve_levels(const RunConfig& config) {
  std::vector<int> levels = config.levels;
  if (levels.empty()) {
    levels = config.preset == "example2" ? std::vector<int>{16, 32, 64}
                                         : std::vector<int>{16, 32, 64, 128};
  }
  if (levels.size() < 3) throw Error(ErrorCode::invalid_param, "need at least three levels");
  for (std::size_t i = 1; i < levels.size(); ++i)
    if (levels[i] != 2 * levels[i - 1])
      throw Error(ErrorCode::bad_sequence, "levels must double: got " + std::to_string(levels[i - 1]) +
                                               " then " + std::to_string(levels[i]));
  return levels;
}

int run_solve(const RunConfig& config, std::ostream& out, std::ostream& /*err*/) {
  const auto p = preset(config.preset);
  const auto mesh = build_mesh(p.geometry, config.n, config.element);
  const double eta = penalty(config, p.data);
  const auto params = SchemeParams::uniform(mesh, eta, config.scheme);
  const auto result = solve_problem(mesh, p.data, params, config.solver, config.tol);
  const auto metrics = mesh_metrics(mesh);

  std::ostringstream s;
  s << "preset," << config.preset << '\n'
    << "element," << (config.element == ElementKind::rectangle ? "q1" : "p1") << '\n'
    << "scheme," << (config.scheme == Scheme::primary ? "primary" : "alternative") << '\n'
    << "n," << mesh.n << '\n'
    << "eta," << num(eta) << '\n'
    << "elements," << mesh.elements.size() << '\n'
    << "interface_edges," << mesh.count(EdgeClass::interface) << '\n'
    << "h," << num(metrics.h) << '\n'
    << "nu1," << num(metrics.nu1) << '\n'
    << "full_dofs," << result.full_dim << '\n'
    << "condensed_dofs," << result.condensed_dim << '\n'
    << "solver," << (config.solver == SolverMethod::direct ? "direct" : "cg") << '\n'
    << "iterations," << result.iterations << '\n'
    << "relative_residual," << num(result.relative_residual, "%.3e") << '\n';
  if (p.data.has_exact()) {
    const auto e = errors_vs_exact(mesh, result.solution, p.data);
    s << "E_h," << num(e.energy) << '\n' << "e_h," << num(e.l2) << '\n';
  }
  emit(config, s.str(), out);
  if (config.out) out << s.str();
  return ok;
}

int run_convergence(const RunConfig& config, std::ostream& out, std::ostream& err) {
  const auto p = preset(config.preset);
  const auto levels = resolve_levels(config);

  auto solve_level = [&](int n) {
    const auto mesh = build_mesh(p.geometry, n, config.element);
    const auto params = SchemeParams::uniform(mesh, penalty(config, p.data), config.scheme);
    auto result = solve_problem(mesh, p.data, params, config.solver, config.tol);
    return std::pair{mesh, std::move(result.solution)};
  };

  std::optional<std::pair<Mesh, DiscreteSolution>> reference;
  if (!p.data.has_exact()) {
    const int ref_n = 2 * levels.back();
    err << "reference solution at n=" << ref_n << '\n';
    reference = solve_level(ref_n);
  }

  std::vector<LevelErrors> rows;
  for (int n : levels) {
    const auto [mesh, uh] = solve_level(n);
    const auto e = reference ? errors_vs_reference(mesh, uh, reference->first, reference->second)
                             : errors_vs_exact(mesh, uh, p.data);
    rows.push_back({mesh.spacing(), e.energy, e.l2});
  }
  const std::string csv = rates(rows).to_csv();
  emit(config, csv, out);
  if (config.out) out << csv;
  return ok;
}

int run_verify(const RunConfig& config, std::ostream& out, std::ostream& err) {
  const auto p = preset(config.preset);
  const auto mesh = build_mesh(p.geometry, config.n, config.element);
  const double eta = penalty(config, p.data);

  std::vector<double> sweep{0.01, 0.1, 1.0, 10.0, 100.0};
  if (std::find(sweep.begin(), sweep.end(), eta) == sweep.end()) sweep.push_back(eta);
  std::sort(sweep.begin(), sweep.end());
  std::vector<CoercivityReport> reports;
  for (double e : sweep) reports.push_back(coercivity_min_eig(mesh, p.data, e));
  emit(config, to_csv(reports), out);

  std::ostream& info = config.out ? out : err;
  const auto threshold = eta_star_estimate(mesh, p.data);
  info << "mesh " << mesh_label(mesh) << '\n'
       << "eta_star " << (threshold.sign_change ? num(threshold.eta) : "0 (NoSignChange)") << '\n'
       << "norm_equivalence_C0 " << num(norm_equivalence_constant(mesh, eta)) << '\n'
       << "boundedness_max_eig " << num(boundedness_max_eig(mesh, p.data, eta)) << '\n';
  return ok;
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    switch (config.command) {
      case Command::solve: return run_solve(config, out, err);
      case Command::convergence: return run_convergence(config, out, err);
      case Command::verify: return run_verify(config, out, err);
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e.code());
  }
  return ok;
}

}  // namespace hdgi::cli
