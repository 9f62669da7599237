#pragma once

#include "dwell/groundmap.hpp"
#include "dwell/kernels.hpp"
#include "dwell/quadrature.hpp"

namespace dwell {

/// Right and left probability masses of a state and their quotient
/// Q = (integral over x > 0 of psi^2) / (integral over x < 0 of psi^2).
struct AsymmetryReport {
  double mass_right = 0.0;
  double mass_left = 0.0;
  double q = 1.0;
  double tail_bound = 0.0;   // tail mass estimate beyond the window, both sides
  double half_width = 0.0;   // window actually integrated
  double error_estimate = 0.0;
  /// mass_left fell below abs_tol: Q is only known to exceed 1 / abs_tol and
  /// `q` is +inf.
  bool saturated = false;
};

/// Adaptive quadrature of psi^2 on [-L, 0] and [0, L] separately.
/// Throws NumericError("quadrature") on non-convergence.
AsymmetryReport q_quotient(const FunctionExpr& psi, const QuadratureConfig& cfg = {});
AsymmetryReport q_quotient(const GroundState& psi, const QuadratureConfig& cfg = {});

/// Exact Q for alpha sech(k x - D) + (1 - alpha) sech(k x + D); independent of k.
double q_closed_form_sech(double k, double D, double alpha);

/// Limit of Q(alpha) / Q(1 - alpha) as alpha -> 1 for the sech family: e^{4D}.
double q_ratio_limit(double D);

struct SupDistanceReport {
  Grid grid;
  double sup_estimate = 0.0;
  double arg_max = 0.0;
};

/// Default sup-norm grid: 8001 points on [-W, W], W = max(40, 3 D / k).
Grid default_sup_grid(double D, double k);

/// max |Va - Vb| over the grid, then once more on a 10x finer patch around
/// the maximizer. An estimate, not a certified bound.
SupDistanceReport sup_distance(const Potential& Va, const Potential& Vb, const Grid& grid,
                               Exec exec = Exec::Parallel);

}  // namespace dwell
