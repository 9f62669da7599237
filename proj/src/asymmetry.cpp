#include "dwell/asymmetry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace dwell {

AsymmetryReport q_quotient(const FunctionExpr& psi, const QuadratureConfig& cfg) {
  cfg.validate();
  const double L = resolve_half_width(psi, cfg);
  const QuadratureResult left = integrate_square(psi, -L, 0.0, cfg);
  const QuadratureResult right = integrate_square(psi, 0.0, L, cfg);

  AsymmetryReport r;
  r.half_width = L;
  r.mass_left = left.value;
  r.mass_right = right.value;
  r.error_estimate = left.error_estimate + right.error_estimate;
  r.tail_bound = square_tail_bound(psi, L, Side::Left) + square_tail_bound(psi, L, Side::Right);
  if (r.mass_left < cfg.abs_tol) {
    r.saturated = true;
    r.q = std::numeric_limits<double>::infinity();
  } else {
    r.q = r.mass_right / r.mass_left;
  }
  return r;
}

AsymmetryReport q_quotient(const GroundState& psi, const QuadratureConfig& cfg) {
  return q_quotient(psi.expr(), cfg);
}

double q_closed_form_sech(double k, double D, double alpha) {
  if (!(k > 0.0)) throw std::invalid_argument("k must be > 0");
  if (!(D > 0.0)) throw std::invalid_argument("D must be > 0");
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must lie in (0, 1)");
  const double a2 = alpha * alpha;
  const double b2 = (1.0 - alpha) * (1.0 - alpha);
  const double cross = 2.0 * alpha * (1.0 - alpha) * D / std::sinh(D);
  const double ep = std::exp(D);
  const double em = std::exp(-D);
  return (a2 * ep + b2 * em + cross) / (a2 * em + b2 * ep + cross);
}

double q_ratio_limit(double D) {
  if (!(D > 0.0)) throw std::invalid_argument("D must be > 0");
  return std::exp(4.0 * D);
}

Grid default_sup_grid(double D, double k) {
  if (!(k > 0.0)) throw std::invalid_argument("k must be > 0");
  const double w = std::max(40.0, 3.0 * std::abs(D) / k);
  return Grid::make(-w, w, 8001);
}

SupDistanceReport sup_distance(const Potential& Va, const Potential& Vb, const Grid& grid,
                               Exec exec) {
  const RealFn fa = [&Va](double x) { return Va(x); };
  const RealFn fb = [&Vb](double x) { return Vb(x); };
  const auto a = sample(fa, grid, exec);
  const auto b = sample(fb, grid, exec);
  const ArgMax coarse = max_abs_difference(a, b, exec);

  SupDistanceReport r{grid, coarse.value, grid.at(coarse.index)};
  const double h = grid.spacing();
  const double lo = std::max(grid.x_min, r.arg_max - h);
  const double hi = std::min(grid.x_max, r.arg_max + h);
  if (lo < hi) {
    const Grid patch = Grid::make(lo, hi, 21);
    const auto pa = sample(fa, patch, Exec::Serial);
    const auto pb = sample(fb, patch, Exec::Serial);
    const ArgMax fine = max_abs_difference(pa, pb, Exec::Serial);
    if (fine.value > r.sup_estimate) {
      r.sup_estimate = fine.value;
      r.arg_max = patch.at(fine.index);
    }
  }
  return r;
}

}  // namespace dwell
