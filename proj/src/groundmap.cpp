#include "dwell/groundmap.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace dwell {

namespace {

FunctionExpr shape_expr(const ShapeHint& hint) {
  struct Visitor {
    FunctionExpr operator()(std::monostate) const { return FunctionExpr::constant(1.0); }
    FunctionExpr operator()(const shape::Soliton& s) const {
      return FunctionExpr::primitive(Primitive::Sech, 1.0, s.k);
    }
    FunctionExpr operator()(const shape::Gaussian& s) const {
      return FunctionExpr::primitive(Primitive::Gaussian, 1.0, s.k);
    }
    FunctionExpr operator()(const shape::RosenMorse& s) const {
      return FunctionExpr::primitive(Primitive::RosenMorseNu, 1.0, s.k);
    }
    FunctionExpr operator()(const shape::SechFamily& s) const {
      return combine(s.alpha, FunctionExpr::primitive(Primitive::Sech, 1.0, s.k, -s.D),
                     1.0 - s.alpha, FunctionExpr::primitive(Primitive::Sech, 1.0, s.k, s.D));
    }
  };
  return std::visit(Visitor{}, hint);
}

ShapeHint dilate_hint(const ShapeHint& hint, double k) {
  struct Visitor {
    double k;
    ShapeHint operator()(std::monostate) const { return {}; }
    ShapeHint operator()(shape::Soliton s) const { return shape::Soliton{s.k * k}; }
    ShapeHint operator()(shape::Gaussian s) const { return shape::Gaussian{s.k * k}; }
    ShapeHint operator()(shape::RosenMorse s) const { return shape::RosenMorse{s.k * k}; }
    ShapeHint operator()(shape::SechFamily s) const { return shape::SechFamily{s.k * k, s.D, s.alpha}; }
  };
  return std::visit(Visitor{k}, hint);
}

// log(c) where expr == c * shape, checked at a few points.
double hint_log_scale(const FunctionExpr& expr, const ShapeHint& hint) {
  const FunctionExpr ref = shape_expr(hint);
  constexpr double probes[] = {0.0, -3.7, 2.3, 11.0, -17.5};
  double first = 0.0;
  for (std::size_t i = 0; i < std::size(probes); ++i) {
    const ScaledSample a = expr.eval_scaled(probes[i]);
    const ScaledSample b = ref.eval_scaled(probes[i]);
    if (!(a.value > 0.0) || !(b.value > 0.0))
      throw std::invalid_argument("shape hint does not match expression (sign)");
    const double lc = a.log_scale - b.log_scale + std::log(a.value / b.value);
    if (i == 0) {
      first = lc;
    } else if (std::abs(lc - first) > 1e-10) {
      std::ostringstream msg;
      msg << "shape hint does not match expression at x = " << probes[i];
      throw std::invalid_argument(msg.str());
    }
  }
  return first;
}

double sech_squared(double u) { return std::exp(2.0 * log_sech(u)); }

double sech_family_value(const shape::SechFamily& s, double x) {
  // k^2 - 2 k^2 (a sech^3(u1) + b sech^3(u2)) / (a sech(u1) + b sech(u2)),
  // with the weights a sech(u), b sech(u) taken relative to the larger one.
  const double u1 = s.k * x - s.D;
  const double u2 = s.k * x + s.D;
  const double l1 = std::log(s.alpha) + log_sech(u1);
  const double l2 = std::log1p(-s.alpha) + log_sech(u2);
  const double m = std::max(l1, l2);
  const double w1 = std::exp(l1 - m);
  const double w2 = std::exp(l2 - m);
  const double ratio = (w1 * sech_squared(u1) + w2 * sech_squared(u2)) / (w1 + w2);
  const double k2 = s.k * s.k;
  return k2 - 2.0 * k2 * ratio;
}

void check_positive_on_grid(const FunctionExpr& expr, const char* what) {
  const double h = 2.0 * kValidationHalfWidth / static_cast<double>(kValidationPoints - 1);
  for (std::size_t i = 0; i < kValidationPoints; ++i) {
    const double x = -kValidationHalfWidth + static_cast<double>(i) * h;
    const ScaledSample s = expr.eval_scaled(x);
    if (!(s.value > 0.0)) {
      std::ostringstream msg;
      msg << what << " is not positive at x = " << x;
      throw std::invalid_argument(msg.str());
    }
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// GroundState

GroundState GroundState::from_expr(FunctionExpr expr, ShapeHint hint) {
  check_positive_on_grid(expr, "ground state");
  resolve_half_width(expr, QuadratureConfig{});
  double c = 1.0;
  if (hint.index() != 0) c = std::exp(hint_log_scale(expr, hint));
  return GroundState(std::move(expr), hint, c, false, std::nullopt);
}

GroundState GroundState::sech() {
  return GroundState(FunctionExpr::primitive(Primitive::Sech), shape::Soliton{1.0}, 1.0, false, 2.0);
}

GroundState GroundState::gaussian() {
  return GroundState(FunctionExpr::primitive(Primitive::Gaussian), shape::Gaussian{1.0}, 1.0, false,
                     std::sqrt(std::acos(-1.0)));
}

GroundState GroundState::rosen_morse() {
  // Integral of e^x sech^2 x over the line is pi.
  return GroundState(FunctionExpr::primitive(Primitive::RosenMorseNu), shape::RosenMorse{1.0}, 1.0,
                     false, std::acos(-1.0));
}

// ---------------------------------------------------------------------------
// Potential

double Potential::generic(double x) const { return source_.expr().eval_scaled(x).curvature_ratio(); }

double Potential::operator()(double x) const {
  struct Visitor {
    const Potential& self;
    double x;
    double operator()(std::monostate) const { return self.generic(x); }
    double operator()(const shape::Soliton& s) const {
      return s.k * s.k * (1.0 - 2.0 * sech_squared(s.k * x));
    }
    double operator()(const shape::Gaussian& s) const {
      const double y = s.k * x;
      return s.k * s.k * (y * y - 1.0);
    }
    double operator()(const shape::RosenMorse& s) const {
      const double y = s.k * x;
      return s.k * s.k * (1.25 - 2.0 * sech_squared(y) - std::tanh(y));
    }
    double operator()(const shape::SechFamily& s) const { return sech_family_value(s, x); }
    double operator()(const Blend& b) const {
      const ScaledSample a0 = b.w0.eval_scaled(x);
      const ScaledSample a1 = b.w1.eval_scaled(x);
      const double m = std::max(a0.log_scale, a1.log_scale);
      const double p0 = a0.is_zero() ? 0.0 : a0.value * std::exp(a0.log_scale - m);
      const double p1 = a1.is_zero() ? 0.0 : a1.value * std::exp(a1.log_scale - m);
      if (!(p0 + p1 > 0.0)) throw NumericError("division hazard", "family weights vanish");
      const double k2 = b.k * b.k;
      const double v0 = p0 > 0.0 ? (*b.v0)(b.k * x + b.X) : 0.0;
      const double v1 = p1 > 0.0 ? (*b.v1)(b.k * x - b.X) : 0.0;
      return k2 * (p0 * v0 + p1 * v1) / (p0 + p1);
    }
    double operator()(const Dilated& d) const { return d.k * d.k * (*d.inner)(d.k * x); }
  };
  return std::visit(Visitor{*this, x}, form_);
}

std::string Potential::form_name() const {
  switch (form_.index()) {
    case 0: return "generic";
    case 1: return "soliton";
    case 2: return "gaussian";
    case 3: return "rosen_morse";
    case 4: return "sech_family";
    case 5: return "weighted_family";
    case 6: return "dilated";
  }
  return "?";
}

Potential to_potential(const GroundState& psi) {
  struct Visitor {
    Potential::Form operator()(std::monostate) const { return std::monostate{}; }
    Potential::Form operator()(const shape::Soliton& s) const { return s; }
    Potential::Form operator()(const shape::Gaussian& s) const { return s; }
    Potential::Form operator()(const shape::RosenMorse& s) const { return s; }
    Potential::Form operator()(const shape::SechFamily& s) const { return s; }
  };
  return Potential(psi, std::visit(Visitor{}, psi.hint()));
}

// ---------------------------------------------------------------------------
// Convex families

void ConvexFamilySpec::validate() const {
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must lie in (0, 1)");
  if (!(separation >= 0.0) || !std::isfinite(separation))
    throw std::invalid_argument("separation must be finite and >= 0");
  if (!(scale > 0.0) || !std::isfinite(scale)) throw std::invalid_argument("scale must be > 0");
}

GroundState convex_state(const ConvexFamilySpec& spec) {
  spec.validate();
  const FunctionExpr mix = combine(spec.alpha, shift(spec.psi1.expr(), -spec.separation),
                                   1.0 - spec.alpha, shift(spec.psi0.expr(), spec.separation));
  FunctionExpr expr = dilate(mix, spec.scale);

  // A matched sech pair c sech(k0 x) is the closed-form sech family.
  ShapeHint hint;
  double c = 1.0;
  const auto* s0 = std::get_if<shape::Soliton>(&spec.psi0.hint());
  const auto* s1 = std::get_if<shape::Soliton>(&spec.psi1.hint());
  if (s0 && s1 && s0->k == s1->k && spec.psi0.hint_scale() == spec.psi1.hint_scale()) {
    hint = shape::SechFamily{spec.scale * s0->k, s0->k * spec.separation, spec.alpha};
    c = spec.psi0.hint_scale();
  }
  // Positive combination of positive square-integrable states stays valid.
  return GroundState(std::move(expr), hint, c, false, std::nullopt);
}

Potential convex_potential(const ConvexFamilySpec& spec) {
  GroundState state = convex_state(spec);
  if (std::holds_alternative<shape::SechFamily>(state.hint())) return to_potential(state);
  return blend_potential(spec);
}

Potential blend_potential(const ConvexFamilySpec& spec) {
  GroundState state = convex_state(spec);
  const double k = spec.scale;
  const double X = spec.separation;
  Potential::Blend blend{
      std::make_shared<const Potential>(to_potential(spec.psi0)),
      std::make_shared<const Potential>(to_potential(spec.psi1)),
      dilate(shift(spec.psi0.expr(), X), k).scaled_by(1.0 - spec.alpha),
      dilate(shift(spec.psi1.expr(), -X), k).scaled_by(spec.alpha),
      k,
      X};
  return Potential(std::move(state), std::move(blend));
}

// ---------------------------------------------------------------------------
// Decomposition

std::pair<GroundState, GroundState> decompose(const GroundState& Phi, const FunctionExpr& weight) {
  const FunctionExpr rest = complement(weight);
  try {
    check_positive_on_grid(weight, "weight f");
    check_positive_on_grid(rest, "weight 1 - f");
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument(std::string("decompose requires 0 < f < 1: ") + e.what());
  }
  GroundState phi0 = GroundState::from_expr(FunctionExpr::product(weight.scaled_by(2.0), Phi.expr()));
  GroundState phi1 = GroundState::from_expr(FunctionExpr::product(rest.scaled_by(2.0), Phi.expr()));
  return {std::move(phi0), std::move(phi1)};
}

// ---------------------------------------------------------------------------
// Scaling and normalization

GroundState scale_state(const GroundState& psi, double k) {
  if (!(k > 0.0) || !std::isfinite(k)) throw std::invalid_argument("scale factor k must be > 0");
  const double root = std::sqrt(k);
  return GroundState(dilate(psi.expr(), k).scaled_by(root), dilate_hint(psi.hint(), k),
                     psi.hint_scale() * root, psi.normalized(), psi.cached_norm2());
}

Potential scale_potential(const Potential& V, double k) {
  GroundState source = scale_state(V.source(), k);
  struct Visitor {
    const Potential& V;
    double k;
    Potential::Form operator()(std::monostate) const { return std::monostate{}; }
    Potential::Form operator()(shape::Soliton s) const { return shape::Soliton{s.k * k}; }
    Potential::Form operator()(shape::Gaussian s) const { return shape::Gaussian{s.k * k}; }
    Potential::Form operator()(shape::RosenMorse s) const { return shape::RosenMorse{s.k * k}; }
    Potential::Form operator()(shape::SechFamily s) const {
      return shape::SechFamily{s.k * k, s.D, s.alpha};
    }
    Potential::Form operator()(const Potential::Blend&) const {
      return Potential::Dilated{std::make_shared<const Potential>(V), k};
    }
    Potential::Form operator()(const Potential::Dilated& d) const {
      return Potential::Dilated{d.inner, d.k * k};
    }
  };
  return Potential(std::move(source), std::visit(Visitor{V, k}, V.form_));
}

double squared_norm(const GroundState& psi, const QuadratureConfig& cfg) {
  if (auto n = psi.cached_norm2()) return *n;
  const double L = resolve_half_width(psi.expr(), cfg);
  const double left = integrate_square(psi.expr(), -L, 0.0, cfg).value;
  const double right = integrate_square(psi.expr(), 0.0, L, cfg).value;
  return left + right;
}

GroundState normalize(const GroundState& psi, const QuadratureConfig& cfg) {
  if (psi.normalized()) return psi;
  const double n2 = squared_norm(psi, cfg);
  if (!(n2 > 0.0) || !std::isfinite(n2)) throw NumericError("normalize", "norm is not finite and positive");
  const double c = 1.0 / std::sqrt(n2);
  return GroundState(psi.expr().scaled_by(c), psi.hint(), psi.hint_scale() * c, true, 1.0);
}

GroundState sech_family_state(double k, double D, double alpha) {
  return convex_state(ConvexFamilySpec{GroundState::sech(), GroundState::sech(), alpha, D, k});
}

}  // namespace dwell
