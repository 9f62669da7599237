#include "dwell/certify.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace dwell {

SensitivityConstants sensitivity_constants(double M) {
  if (!(M > 0.0) || !std::isfinite(M)) throw std::invalid_argument("M must be finite and > 0");
  SensitivityConstants c;
  c.M = M;
  const double r = M / (M + 4.0);
  c.a_M = r * (-1.0 + std::sqrt(r * r + 1.0));
  c.b_M = (M + 1.0) / (M + 2.0) *
          (-1.0 + std::sqrt((M + 2.0) * M / ((M + 1.0) * (M + 1.0) * (M + 1.0)) + 1.0));
  c.delta_M = c.a_M * c.b_M / (1.0 + c.a_M + c.b_M);

  // With u = 1 - alpha the defining equation becomes
  // (M + d^2) u^2 + 2 (1 - d^2) u + C = 0, C = (M + 1) d (2 + d) - (1 - d^2);
  // alpha_M is the smaller alpha root, i.e. the larger u root.
  const double d = c.delta_M;
  const double A = M + d * d;
  const double h = 1.0 - d * d;
  const double C = (M + 1.0) * d * (2.0 + d) - h;
  const double disc = h * h - A * C;
  if (!(disc >= 0.0) || !(C < 0.0)) throw std::logic_error("sensitivity_constants: no root for alpha_M in (0, 1)");
  const double u = -C / (h + std::sqrt(disc));
  c.alpha_M = 1.0 - u;
  c.D_M = 0.25 * std::log1p(M);
  c.residual = h * (1.0 - u) * (1.0 - u) / (u * u + d * d + 2.0 * d) - (M + 1.0);

  const double a = c.alpha_M;
  std::ostringstream why;
  if (!(d > 0.0 && d < 1.0)) why << "delta_M = " << d << " outside (0, 1); ";
  if (!(a > 0.0 && a < 1.0)) why << "alpha_M = " << a << " outside (0, 1); ";
  if (!(std::abs(c.residual) < 1e-9)) why << "residual " << c.residual << " >= 1e-9; ";
  if (!why.str().empty()) throw std::logic_error("sensitivity_constants(M=" + std::to_string(M) + "): " + why.str());
  return c;
}

double quotient_ratio_lower_bound(double alpha, double delta) {
  const double d = delta;
  const double base = (1.0 - d * d) * alpha * alpha / ((1.0 - alpha) * (1.0 - alpha) + 2.0 * d + d * d);
  return base * base;
}

QuotientBounds quotient_bounds(double alpha, double delta) {
  const double d = delta;
  const double a2 = alpha * alpha;
  const double b2 = (1.0 - alpha) * (1.0 - alpha);
  return {(1.0 - d * d) * a2 / (b2 + 2.0 * d + d * d), (a2 + 2.0 * d + d * d) / ((1.0 - d * d) * b2)};
}

// ---------------------------------------------------------------------------
// Separation search

namespace {

struct TailMasses {
  double right_of_0_left_well;
  double left_of_0_right_well;
};

TailMasses cross_origin_masses(const GroundState& phi0, const GroundState& phi1, double X,
                               const QuadratureConfig& cfg) {
  const FunctionExpr left_well = shift(phi0.expr(), X);    // phi0(x + X)
  const FunctionExpr right_well = shift(phi1.expr(), -X);  // phi1(x - X)
  const double L0 = resolve_half_width(left_well, cfg);
  const double L1 = resolve_half_width(right_well, cfg);
  return {integrate_square(left_well, 0.0, L0, cfg).value,
          integrate_square(right_well, -L1, 0.0, cfg).value};
}

}  // namespace

SeparationResult find_separation(const GroundState& phi0, const GroundState& phi1, double delta,
                                 const QuadratureConfig& cfg) {
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("delta must lie in (0, 1)");
  if (!phi0.normalized() || !phi1.normalized())
    throw std::invalid_argument("find_separation requires normalized states");
  const double target = delta * delta;
  auto ok = [&](const TailMasses& m) {
    return m.right_of_0_left_well < target && m.left_of_0_right_well < target;
  };

  constexpr double kMaxSeparation = 1e4;
  double hi = 1.0;
  TailMasses at_hi = cross_origin_masses(phi0, phi1, hi, cfg);
  while (!ok(at_hi)) {
    hi *= 2.0;
    if (hi > kMaxSeparation)
      throw NumericError("separation", "no X <= 1e4 brings the tail masses below delta^2");
    at_hi = cross_origin_masses(phi0, phi1, hi, cfg);
  }
  double lo = hi > 1.0 ? 0.5 * hi : 0.0;
  for (int it = 0; it < 60 && hi - lo > 1e-9 * std::max(1.0, hi); ++it) {
    const double mid = 0.5 * (lo + hi);
    const TailMasses m = cross_origin_masses(phi0, phi1, mid, cfg);
    if (ok(m)) {
      hi = mid;
      at_hi = m;
    } else {
      lo = mid;
    }
  }
  return {delta, hi, at_hi.left_of_0_right_well, at_hi.right_of_0_left_well};
}

// ---------------------------------------------------------------------------
// Families

GroundState WellFamily::member(double alpha, double k) const {
  return scale_state(convex_state(spec(alpha)), k);
}

Potential WellFamily::potential(double alpha, double k) const {
  return scale_potential(convex_potential(spec(alpha)), k);
}

std::vector<double> default_alpha_sample() {
  std::vector<double> a;
  for (int i = 1; i <= 19; ++i) a.push_back(0.05 * i);
  return a;
}

SupDistanceReport family_spread(const WellFamily& family, const std::vector<double>& alphas,
                                double k, const Grid& grid, Exec exec) {
  if (alphas.size() < 2) throw std::invalid_argument("family_spread needs at least two members");
  std::vector<Potential> members;
  members.reserve(alphas.size());
  for (double a : alphas) members.push_back(family.potential(a, k));

  auto columns_on = [&](const Grid& g, Exec e) {
    std::vector<std::vector<double>> cols;
    cols.reserve(members.size());
    for (const auto& V : members) cols.push_back(sample([&V](double x) { return V(x); }, g, e));
    return cols;
  };

  const auto coarse_cols = columns_on(grid, exec);
  const ArgMax coarse = max_spread(coarse_cols, exec);
  SupDistanceReport r{grid, coarse.value, grid.at(coarse.index)};

  const double h = grid.spacing();
  const double lo = std::max(grid.x_min, r.arg_max - h);
  const double hi = std::min(grid.x_max, r.arg_max + h);
  if (lo < hi) {
    const Grid patch = Grid::make(lo, hi, 21);
    const ArgMax fine = max_spread(columns_on(patch, Exec::Serial), Exec::Serial);
    if (fine.value > r.sup_estimate) {
      r.sup_estimate = fine.value;
      r.arg_max = patch.at(fine.index);
    }
  }
  return r;
}

// ---------------------------------------------------------------------------
// Certification

namespace {

template <class Fn>
auto stage(const char* name, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const NumericError& e) {
    if (e.stage() == name) throw;
    throw NumericError(name, e.what());
  } catch (const std::exception& e) {
    throw NumericError(name, e.what());
  }
}

void require_bounded(const Potential& V, const char* which) {
  double inner = 0.0;
  const double h = 2.0 * kValidationHalfWidth / static_cast<double>(kValidationPoints - 1);
  for (std::size_t i = 0; i < kValidationPoints; ++i) {
    const double v = V(-kValidationHalfWidth + static_cast<double>(i) * h);
    if (!std::isfinite(v)) throw std::invalid_argument(std::string(which) + " is not finite");
    inner = std::max(inner, std::abs(v));
  }
  double outer = 0.0;
  for (double x : {80.0, 160.0, 320.0}) outer = std::max({outer, std::abs(V(x)), std::abs(V(-x))});
  if (!std::isfinite(outer) || outer > 2.0 * inner + 1.0)
    throw std::invalid_argument(std::string(which) + " grows without bound");
}

}  // namespace

CertificationReport certify_family(double epsilon, double M,
                                   const std::pair<GroundState, GroundState>& pair,
                                   CertificationTrace* trace) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be > 0");

  const SensitivityConstants c = stage("constants", [&] { return sensitivity_constants(M); });

  const auto [phi0, phi1] = stage("precondition", [&] {
    GroundState a = normalize(pair.first);
    GroundState b = normalize(pair.second);
    require_bounded(to_potential(a), "potential of the first state");
    require_bounded(to_potential(b), "potential of the second state");
    return std::pair<GroundState, GroundState>{a, b};
  });

  const SeparationResult sep =
      stage("separation", [&] { return find_separation(phi0, phi1, c.delta_M); });
  const WellFamily family{phi0, phi1, sep.X_delta};

  CertificationReport r;
  r.epsilon = epsilon;
  r.M = M;
  r.alpha_M = c.alpha_M;
  r.beta_M = 1.0 - c.alpha_M;

  std::vector<double> alphas = default_alpha_sample();
  alphas.push_back(r.alpha_M);
  alphas.push_back(r.beta_M);

  const double raw = stage("envelope", [&] {
    return family_spread(family, alphas, 1.0, default_sup_grid(family.X, 1.0)).sup_estimate;
  });
  r.C_M = kEnvelopeSafetyFactor * raw;
  r.K = r.C_M < 1e-12 ? kMaxDilation : std::sqrt(epsilon / r.C_M);

  stage("measurement", [&] {
    r.measured_sup =
        family_spread(family, alphas, r.K, default_sup_grid(family.X, r.K)).sup_estimate;
    r.q_alpha = q_quotient(family.member(r.alpha_M, r.K)).q;
    r.q_beta = q_quotient(family.member(r.beta_M, r.K)).q;
    return 0;
  });
  r.q_ratio = r.q_alpha / r.q_beta;
  r.pass_eps = r.measured_sup < epsilon;
  r.pass_M = r.q_ratio > M;

  if (trace) {
    trace->constants = c;
    trace->separation = sep;
    trace->raw_spread = raw;
    trace->q_ratio_unscaled = stage("measurement", [&] {
      return q_quotient(family.member(r.alpha_M)).q / q_quotient(family.member(r.beta_M)).q;
    });
  }
  return r;
}

SechShortcut sech_shortcut(double M) {
  if (!(M > 0.0)) throw std::invalid_argument("M must be > 0");
  SechShortcut s;
  s.D_M = 0.25 * std::log1p(M);
  for (int j = 1; j <= 60; ++j) {
    const double alpha = 1.0 - std::ldexp(1.0, -j);
    const double ratio = q_closed_form_sech(1.0, s.D_M, alpha) / q_closed_form_sech(1.0, s.D_M, 1.0 - alpha);
    if (ratio > M) {
      s.alpha = alpha;
      s.ratio = ratio;
      return s;
    }
  }
  throw NumericError("sech shortcut", "no alpha = 1 - 2^-j (j <= 60) exceeds M");
}

}  // namespace dwell
