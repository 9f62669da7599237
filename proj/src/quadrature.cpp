#include "dwell/quadrature.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace dwell {

void QuadratureConfig::validate() const {
  if (!(half_width > 0.0)) throw std::invalid_argument("quadrature half_width must be > 0");
  if (!(rel_tol > 0.0) || !(abs_tol > 0.0))
    throw std::invalid_argument("quadrature tolerances must be > 0");
  if (max_refinements < 1) throw std::invalid_argument("quadrature max_refinements must be >= 1");
}

namespace {

struct Segment {
  double a, b;
  double fa, fm, fb;
  double whole;
  int depth;
};

double simpson(double a, double b, double fa, double fm, double fb) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

}  // namespace

QuadratureResult adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                                  double rel_tol, double abs_tol, int max_depth, int panels) {
  if (!(a < b)) throw std::invalid_argument("adaptive_simpson requires a < b");
  if (panels < 1) panels = 1;

  QuadratureResult out;
  std::vector<Segment> stack;
  stack.reserve(static_cast<std::size_t>(panels) + 4 * static_cast<std::size_t>(max_depth));

  const double width = b - a;
  const double step = width / panels;
  double estimate = 0.0;
  double f_left = f(a);
  ++out.evaluations;
  for (int i = 0; i < panels; ++i) {
    const double pa = a + i * step;
    const double pb = (i + 1 == panels) ? b : a + (i + 1) * step;
    const double pm = 0.5 * (pa + pb);
    const double fm = f(pm);
    const double fb = f(pb);
    out.evaluations += 2;
    const double s = simpson(pa, pb, f_left, fm, fb);
    estimate += s;
    stack.push_back({pa, pb, f_left, fm, fb, s, 0});
    f_left = fb;
  }

  const double tol = std::max(abs_tol, rel_tol * std::abs(estimate));
  bool failed = false;
  double worst_excess = 0.0;

  while (!stack.empty()) {
    const Segment s = stack.back();
    stack.pop_back();
    const double m = 0.5 * (s.a + s.b);
    const double lm = 0.5 * (s.a + m);
    const double rm = 0.5 * (m + s.b);
    const double flm = f(lm);
    const double frm = f(rm);
    out.evaluations += 2;
    const double left = simpson(s.a, m, s.fa, flm, s.fm);
    const double right = simpson(m, s.b, s.fm, frm, s.fb);
    const double diff = left + right - s.whole;
    const double local_tol = tol * (s.b - s.a) / width;
    if (std::abs(diff) <= 15.0 * local_tol || s.depth >= max_depth) {
      if (std::abs(diff) > 15.0 * local_tol) {
        failed = true;
        worst_excess = std::max(worst_excess, std::abs(diff) / 15.0);
      }
      out.value += left + right + diff / 15.0;
      out.error_estimate += std::abs(diff) / 15.0;
      continue;
    }
    stack.push_back({s.a, m, s.fa, flm, s.fm, left, s.depth + 1});
    stack.push_back({m, s.b, s.fm, frm, s.fb, right, s.depth + 1});
  }

  if (failed || !std::isfinite(out.value)) {
    std::ostringstream msg;
    msg << "no convergence on [" << a << ", " << b << "] within depth " << max_depth
        << "; achieved error estimate " << out.error_estimate << " (worst panel " << worst_excess
        << ", target " << tol << ")";
    throw NumericError("quadrature", msg.str());
  }
  return out;
}

double square_tail_bound(const FunctionExpr& f, double L, Side side) {
  const double x = side == Side::Right ? L : -L;
  const ScaledSample s = f.eval_scaled(x);
  if (s.is_zero()) return 0.0;
  if (s.value == 0.0) return std::numeric_limits<double>::infinity();
  const double outward = side == Side::Right ? -s.d1 / s.value : s.d1 / s.value;
  if (!(outward > 0.0)) return std::numeric_limits<double>::infinity();
  return std::exp(2.0 * s.log_scale) * s.value * s.value / (2.0 * outward);
}

double resolve_half_width(const FunctionExpr& f, const QuadratureConfig& cfg) {
  cfg.validate();
  constexpr double kMaxHalfWidth = 1e5;
  for (double L = cfg.half_width; L <= kMaxHalfWidth; L *= 2.0) {
    if (square_tail_bound(f, L, Side::Left) <= cfg.abs_tol &&
        square_tail_bound(f, L, Side::Right) <= cfg.abs_tol)
      return L;
  }
  throw NumericError("square-integrability",
                     "tail mass does not fall below abs_tol within |x| <= 1e5");
}

QuadratureResult integrate_square(const FunctionExpr& f, double a, double b,
                                  const QuadratureConfig& cfg) {
  return adaptive_simpson(
      [&f](double x) {
        const double v = f.eval(x).value;
        return v * v;
      },
      a, b, cfg.rel_tol, cfg.abs_tol, cfg.max_refinements);
}

}  // namespace dwell
