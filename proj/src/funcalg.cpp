#include "dwell/funcalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace dwell {

namespace {

constexpr double kLog2 = 0.69314718055994530942;

double sech_from_log(double y) { return std::exp(log_sech(y)); }

}  // namespace

const char* to_string(Primitive p) noexcept {
  switch (p) {
    case Primitive::Sech: return "sech";
    case Primitive::Gaussian: return "gaussian";
    case Primitive::RosenMorseNu: return "rosen_morse_nu";
    case Primitive::Logistic: return "logistic";
    case Primitive::Constant: return "constant";
  }
  return "?";
}

double log_sech(double y) noexcept {
  const double a = std::abs(y);
  return kLog2 - a - std::log1p(std::exp(-2.0 * a));
}

// ---------------------------------------------------------------------------
// ScaledSample

ScaledSample ScaledSample::zero() {
  return {-std::numeric_limits<double>::infinity(), 0.0, 0.0, 0.0};
}

ScaledSample ScaledSample::normalized() const {
  double s = std::abs(value);
  if (s == 0.0) s = std::max(std::abs(d1), std::abs(d2));
  if (s == 0.0 || !std::isfinite(s)) return *this;
  return {log_scale + std::log(s), value / s, d1 / s, d2 / s};
}

C2Sample ScaledSample::unscaled(double x) const {
  if (is_zero()) return {x, 0.0, 0.0, 0.0, false};
  const double f = std::exp(log_scale);
  C2Sample s{x, value * f, d1 * f, d2 * f, false};
  s.tail = value != 0.0 && s.value == 0.0;
  return s;
}

double ScaledSample::log_derivative() const {
  if (value == 0.0) throw NumericError("division hazard", "log derivative of a vanishing function");
  return d1 / value;
}

double ScaledSample::curvature_ratio() const {
  if (value == 0.0) throw NumericError("division hazard", "f''/f of a vanishing function");
  return d2 / value;
}

ScaledSample operator+(const ScaledSample& a, const ScaledSample& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  const double m = std::max(a.log_scale, b.log_scale);
  const double fa = std::exp(a.log_scale - m);
  const double fb = std::exp(b.log_scale - m);
  return {m, fa * a.value + fb * b.value, fa * a.d1 + fb * b.d1, fa * a.d2 + fb * b.d2};
}

ScaledSample operator*(const ScaledSample& a, const ScaledSample& b) {
  if (a.is_zero() || b.is_zero()) return ScaledSample::zero();
  return ScaledSample{a.log_scale + b.log_scale, a.value * b.value,
                      a.d1 * b.value + a.value * b.d1,
                      a.d2 * b.value + 2.0 * a.d1 * b.d1 + a.value * b.d2}
      .normalized();
}

ScaledSample operator*(double c, const ScaledSample& a) {
  if (c == 0.0 || a.is_zero()) return ScaledSample::zero();
  const double s = c > 0.0 ? 1.0 : -1.0;
  return {a.log_scale + std::log(std::abs(c)), s * a.value, s * a.d1, s * a.d2};
}

// ---------------------------------------------------------------------------
// Primitives

ScaledSample eval_primitive(Primitive kind, double y) {
  switch (kind) {
    case Primitive::Sech: {
      const double t = std::tanh(y);
      const double s = sech_from_log(y);
      return {log_sech(y), 1.0, -t, 1.0 - 2.0 * s * s};
    }
    case Primitive::Gaussian:
      return {-0.5 * y * y, 1.0, -y, y * y - 1.0};
    case Primitive::RosenMorseNu: {
      const double t = std::tanh(y);
      const double s = sech_from_log(y);
      const double r = 0.5 - t;
      return {0.5 * y + log_sech(y), 1.0, r, r * r - s * s};
    }
    case Primitive::Logistic: {
      // q = 1 - sigma(y) = sigma(-y), computed without cancellation.
      double log_sigma, q;
      if (y >= 0.0) {
        const double e = std::exp(-y);
        log_sigma = -std::log1p(e);
        q = e / (1.0 + e);
      } else {
        const double e = std::exp(y);
        log_sigma = y - std::log1p(e);
        q = 1.0 / (1.0 + e);
      }
      return {log_sigma, 1.0, q, q * (2.0 * q - 1.0)};
    }
    case Primitive::Constant:
      return {0.0, 1.0, 0.0, 0.0};
  }
  return ScaledSample::zero();
}

// ---------------------------------------------------------------------------
// FunctionExpr

FunctionExpr FunctionExpr::primitive(Primitive kind, double coeff, double scale, double shift) {
  if (!(scale > 0.0) || !std::isfinite(scale))
    throw std::invalid_argument("primitive scale must be finite and > 0");
  if (!std::isfinite(coeff) || !std::isfinite(shift))
    throw std::invalid_argument("primitive coefficient and shift must be finite");
  FunctionExpr f;
  f.terms_.push_back(Atom{coeff, kind, scale, shift, false});
  return f;
}

FunctionExpr FunctionExpr::constant(double c) { return primitive(Primitive::Constant, c); }

FunctionExpr FunctionExpr::product(const FunctionExpr& weight, const FunctionExpr& base) {
  FunctionExpr f;
  f.terms_.push_back(Product{1.0, std::make_shared<const FunctionExpr>(weight),
                             std::make_shared<const FunctionExpr>(base)});
  return f;
}

ScaledSample FunctionExpr::eval_scaled(double x) const {
  ScaledSample acc = ScaledSample::zero();
  for (const auto& term : terms_) {
    if (const auto* a = std::get_if<Atom>(&term)) {
      if (a->coeff == 0.0) continue;
      const double m = a->mirrored ? -1.0 : 1.0;
      ScaledSample p = eval_primitive(a->kind, m * (a->scale * x + a->shift));
      p.d1 *= m * a->scale;
      p.d2 *= a->scale * a->scale;
      acc = acc + a->coeff * p;
    } else {
      const auto& p = std::get<Product>(term);
      if (p.coeff == 0.0) continue;
      acc = acc + p.coeff * (p.weight->eval_scaled(x) * p.base->eval_scaled(x));
    }
  }
  return acc.normalized();
}

C2Sample FunctionExpr::eval(double x) const { return eval_scaled(x).unscaled(x); }

FunctionExpr FunctionExpr::scaled_by(double a) const {
  if (!std::isfinite(a)) throw std::invalid_argument("scale factor must be finite");
  FunctionExpr out = *this;
  for (auto& term : out.terms_)
    std::visit([a](auto& t) { t.coeff *= a; }, term);
  return out;
}

template <class AtomFn>
FunctionExpr FunctionExpr::map_atoms(AtomFn&& fn) const {
  FunctionExpr out;
  out.terms_.reserve(terms_.size());
  for (const auto& term : terms_) {
    if (const auto* a = std::get_if<Atom>(&term)) {
      Atom b = *a;
      fn(b);
      out.terms_.push_back(b);
    } else {
      const auto& p = std::get<Product>(term);
      out.terms_.push_back(Product{p.coeff,
                                   std::make_shared<const FunctionExpr>(p.weight->map_atoms(fn)),
                                   std::make_shared<const FunctionExpr>(p.base->map_atoms(fn))});
    }
  }
  return out;
}

FunctionExpr combine(double a, const FunctionExpr& f, double b, const FunctionExpr& g) {
  FunctionExpr out = f.scaled_by(a);
  FunctionExpr gb = g.scaled_by(b);
  out.terms_.insert(out.terms_.end(), gb.terms_.begin(), gb.terms_.end());
  return out;
}

FunctionExpr shift(const FunctionExpr& f, double c) {
  if (!std::isfinite(c)) throw std::invalid_argument("shift must be finite");
  return f.map_atoms([c](FunctionExpr::Atom& a) { a.shift += a.scale * c; });
}

FunctionExpr dilate(const FunctionExpr& f, double k) {
  if (!(k > 0.0) || !std::isfinite(k))
    throw std::invalid_argument("dilation factor must be finite and > 0");
  return f.map_atoms([k](FunctionExpr::Atom& a) { a.scale *= k; });
}

FunctionExpr reflect(const FunctionExpr& f) {
  return f.map_atoms([](FunctionExpr::Atom& a) {
    a.mirrored = !a.mirrored;
    a.shift = -a.shift;
  });
}

FunctionExpr complement(const FunctionExpr& f) {
  if (f.terms_.size() == 1) {
    if (const auto* a = std::get_if<FunctionExpr::Atom>(&f.terms_.front())) {
      if (a->kind == Primitive::Logistic && a->coeff == 1.0) {
        // 1 - sigma(y) = sigma(-y)
        FunctionExpr out = f;
        auto& b = std::get<FunctionExpr::Atom>(out.terms_.front());
        b.mirrored = !b.mirrored;
        return out;
      }
      if (a->kind == Primitive::Constant) return FunctionExpr::constant(1.0 - a->coeff);
    }
  }
  return combine(1.0, FunctionExpr::constant(1.0), -1.0, f);
}

}  // namespace dwell
