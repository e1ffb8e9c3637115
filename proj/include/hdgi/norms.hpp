#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hdgi/assembly.hpp"
#include "hdgi/solver.hpp"

namespace hdgi {

/// Broken H1 seminorm error (energy) and L2 error of a discrete solution.
struct ErrorNorms {
  double energy = 0.0;  ///< E_h
  double l2 = 0.0;      ///< e_h
};

/// Against the closed-form solution; throws MissingExact if there is none.
ErrorNorms errors_vs_exact(const Mesh& mesh, const DiscreteSolution& uh, const ProblemData& data,
                           Exec exec = Exec::parallel);
/// Against a solution on a nested finer mesh, integrated on the fine mesh.
/// Throws NotNested when `ref_mesh` does not refine `mesh`.
ErrorNorms errors_vs_reference(const Mesh& mesh, const DiscreteSolution& uh, const Mesh& ref_mesh,
                               const DiscreteSolution& ref, Exec exec = Exec::parallel);

double l2_error(const Mesh& mesh, const DiscreteSolution& uh, const ProblemData& data);
double h1_broken_error(const Mesh& mesh, const DiscreteSolution& uh, const ProblemData& data);

enum class HdgNorm { one, two };

/// ||(v, v_hat)||_{1,h} or ||.||_{2,h}; boundary edges use the stored traces.
double hdg_norm(const Mesh& mesh, const DiscreteSolution& v, const SchemeParams& params, HdgNorm which);

/// Gram matrix of the squared norm over the full unknown vector (DofMap
/// order, boundary traces fixed at zero).
SparseMatrix hdg_norm_gram(const Mesh& mesh, const SchemeParams& params, HdgNorm which);

struct LevelErrors {
  double h;
  double energy;
  double l2;
};

struct ConvergenceRow {
  double h = 0.0;
  double energy = 0.0;
  std::optional<double> energy_rate;
  double l2 = 0.0;
  std::optional<double> l2_rate;
};

struct ConvergenceRecord {
  std::vector<ConvergenceRow> rows;

  /// "h,E_h,R_h,e_h,r_h", six significant digits, empty rates on row one.
  [[nodiscard]] std::string to_csv() const;
};

/// log2 ratios of consecutive errors; BadSequence unless h halves each row.
ConvergenceRecord rates(std::span<const LevelErrors> levels);

}  // namespace hdgi
