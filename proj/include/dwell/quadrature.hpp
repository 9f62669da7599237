#pragma once

#include <cstddef>
#include <functional>

#include "dwell/funcalg.hpp"

namespace dwell {

/// Integration over the real line is truncated to [-half_width, half_width].
/// The window is widened by doubling whenever the exponential tail estimate
/// beyond it exceeds abs_tol.
struct QuadratureConfig {
  double half_width = 40.0;
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  int max_refinements = 60;  // maximum bisection depth per panel

  void validate() const;
};

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  std::size_t evaluations = 0;
};

/// Adaptive Simpson with Richardson correction on [a, b]. The interval is
/// first cut into `panels` equal pieces so narrow features are not missed.
/// Throws NumericError("quadrature") if some subinterval hits max_depth
/// before meeting its share of the tolerance.
QuadratureResult adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                                  double rel_tol, double abs_tol, int max_depth,
                                  int panels = 256);

enum class Side { Left, Right };

/// Estimate of the mass of f^2 beyond +L (Right) or below -L (Left), assuming
/// f decays at least as fast as its local log-derivative there. Infinite when
/// f is not decaying at the cut.
double square_tail_bound(const FunctionExpr& f, double L, Side side);

/// Smallest cfg.half_width * 2^j (capped at 1e5) whose tail bounds on both
/// sides are below abs_tol. Throws NumericError("square-integrability").
double resolve_half_width(const FunctionExpr& f, const QuadratureConfig& cfg);

/// Integral of f^2 on [a, b].
QuadratureResult integrate_square(const FunctionExpr& f, double a, double b,
                                  const QuadratureConfig& cfg);

}  // namespace dwell
