#pragma once

// Independent eigensolver check: -d^2/dx^2 + V on a Dirichlet box, three-point
// finite differences, bisection on Sturm counts plus inverse iteration.
// Potentials are always evaluated through psi''/psi, never a closed form.

#include <vector>

#include "dwell/groundmap.hpp"
#include "dwell/kernels.hpp"

namespace dwell {

enum class SpectralMethod { FD3 };

const char* to_string(SpectralMethod m) noexcept;

/// Symmetric tridiagonal operator on the interior grid points
/// (the two boundary points carry psi = 0).
struct TridiagonalOperator {
  Grid grid;
  std::vector<double> diag;
  std::vector<double> off;
};

TridiagonalOperator discretize(const RealFn& V, const Grid& grid, Exec exec = Exec::Parallel);
/// Uses V.generic; evaluation failures propagate as NumericError naming x.
TridiagonalOperator discretize(const Potential& V, const Grid& grid, Exec exec = Exec::Parallel);

struct SpectralResult {
  Grid grid;
  SpectralMethod method = SpectralMethod::FD3;
  std::vector<double> eigenvalues;                // ascending
  std::vector<std::vector<double>> eigenvectors;  // full grid, h * sum v^2 = 1
};

struct EigenSolverOptions {
  double eigenvalue_tol = 1e-12;
  int max_iterations = 200;
};

SpectralResult low_spectrum(const TridiagonalOperator& op, std::size_t count,
                            const EigenSolverOptions& opts = {}, Exec exec = Exec::Parallel);
SpectralResult low_spectrum(const Potential& V, const Grid& grid, std::size_t count,
                            const EigenSolverOptions& opts = {}, Exec exec = Exec::Parallel);

/// Default box [-(30 + 3D/k), 30 + 3D/k] with 6000 points.
Grid default_box(double D, double k);

/// |h sum v_i psi(x_i)| / sqrt(h sum psi(x_i)^2) for a grid-normalized v.
double grid_overlap(const std::vector<double>& v, const Grid& grid, const GroundState& psi);

/// Number of sign changes, ignoring entries below rel_floor * max |v|.
std::size_t sign_changes(const std::vector<double>& v, double rel_floor = 1e-12);

/// Least-squares fit of the first excited vector to n_L psi_L - n_R psi_R.
struct TwoLevelFit {
  double n_left = 0.0;
  double n_right = 0.0;
  double overlap_e1 = 0.0;  // norm of the projection onto span{psi_L, psi_R}
};

/// Throws std::invalid_argument when psi_L and psi_R are (nearly) linearly
/// dependent on the grid, e.g. for coincident wells.
TwoLevelFit two_level_check(const Potential& V, const GroundState& left, const GroundState& right,
                            const Grid& grid);
TwoLevelFit two_level_fit(const std::vector<double>& excited, const Grid& grid,
                          const GroundState& left, const GroundState& right);

}  // namespace dwell
