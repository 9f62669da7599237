#pragma once

// Data-parallel inner loops. Every kernel has a serial reference path and an
// OpenMP path selected by `Exec`; both must produce identical results.

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace dwell {

enum class Exec { Serial, Parallel };

/// Uniform grid on [x_min, x_max] with n points, both ends included.
struct Grid {
  double x_min = -1.0;
  double x_max = 1.0;
  std::size_t n = 3;

  static Grid make(double x_min, double x_max, std::size_t n);
  double spacing() const noexcept { return (x_max - x_min) / static_cast<double>(n - 1); }
  double at(std::size_t i) const noexcept;
  std::vector<double> points() const;
};

using RealFn = std::function<double(double)>;

/// f evaluated at every grid point.
std::vector<double> sample(const RealFn& f, const Grid& grid, Exec exec = Exec::Parallel);

struct ArgMax {
  double value = 0.0;
  std::size_t index = 0;
};

/// max_i |a_i - b_i|; ties resolve to the lowest index.
ArgMax max_abs_difference(std::span<const double> a, std::span<const double> b,
                          Exec exec = Exec::Parallel);

/// For a set of functions sampled on the same grid, max over points of
/// (max over functions - min over functions).
ArgMax max_spread(std::span<const std::vector<double>> columns, Exec exec = Exec::Parallel);

/// Number of eigenvalues of the symmetric tridiagonal matrix (diag, off)
/// below x (Sturm sequence count; an eigenvalue equal to x may count).
std::size_t sturm_count(std::span<const double> diag, std::span<const double> off, double x);

/// Lowest `count` eigenvalues by bisection on the Sturm count, each index
/// bracketed independently. Stops when the bracket is narrower than
/// abs_tol + 4 eps |lambda| or after max_iterations halvings.
struct BisectionResult {
  std::vector<double> eigenvalues;
  std::vector<int> iterations;
  bool converged = true;
};
BisectionResult bisect_lowest(std::span<const double> diag, std::span<const double> off,
                              std::size_t count, double abs_tol, int max_iterations,
                              Exec exec = Exec::Parallel);

}  // namespace dwell
