#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace dwell {

/// Thrown when a numerical procedure cannot produce a trustworthy value.
/// `stage()` names the step that failed so callers can report it.
class NumericError : public std::runtime_error {
 public:
  NumericError(std::string stage, const std::string& what)
      : std::runtime_error(stage + ": " + what), stage_(std::move(stage)) {}
  const std::string& stage() const noexcept { return stage_; }

 private:
  std::string stage_;
};

/// Registered closed-form primitives. Each one knows its value and its
/// first two derivatives analytically.
///
///   Sech          sech y
///   Gaussian      exp(-y^2/2)
///   RosenMorseNu  exp(y/2) sech y
///   Logistic      1 / (1 + exp(-y))
///   Constant      1
enum class Primitive { Sech, Gaussian, RosenMorseNu, Logistic, Constant };

const char* to_string(Primitive p) noexcept;

/// (f, f', f'') at a point. `tail` is set when the value underflowed to an
/// exact zero; the scaled evaluation still carries the full information.
struct C2Sample {
  double x = 0.0;
  double value = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
  bool tail = false;
};

/// (f, f', f'') represented as exp(log_scale) * (value, d1, d2). Sums and
/// products are carried out in this form so that ratios such as f''/f stay
/// finite far into the tails where f itself is below the double range.
struct ScaledSample {
  double log_scale = 0.0;
  double value = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;

  static ScaledSample zero();
  bool is_zero() const noexcept { return value == 0.0 && d1 == 0.0 && d2 == 0.0; }
  /// Rescales so that |value| == 1 when value != 0.
  ScaledSample normalized() const;
  C2Sample unscaled(double x) const;
  /// d1 / value. Throws NumericError when value vanishes.
  double log_derivative() const;
  /// d2 / value. Throws NumericError when value vanishes.
  double curvature_ratio() const;
};

ScaledSample operator+(const ScaledSample& a, const ScaledSample& b);
ScaledSample operator*(const ScaledSample& a, const ScaledSample& b);
ScaledSample operator*(double c, const ScaledSample& a);

/// Linear combination of affinely transformed primitives, plus products of
/// two expressions (used for the weighted decompositions 2 f Phi).
///
/// An atom evaluates coeff * prim(m * (scale * x + shift)) with scale > 0 and
/// m = +1, or m = -1 after a reflection. Values are immutable.
class FunctionExpr {
 public:
  static FunctionExpr primitive(Primitive kind, double coeff = 1.0, double scale = 1.0,
                                double shift = 0.0);
  static FunctionExpr constant(double c);
  static FunctionExpr product(const FunctionExpr& weight, const FunctionExpr& base);

  C2Sample eval(double x) const;
  ScaledSample eval_scaled(double x) const;
  double operator()(double x) const { return eval(x).value; }

  FunctionExpr scaled_by(double a) const;

  std::size_t term_count() const noexcept { return terms_.size(); }

  friend FunctionExpr combine(double a, const FunctionExpr& f, double b, const FunctionExpr& g);
  friend FunctionExpr shift(const FunctionExpr& f, double c);
  friend FunctionExpr dilate(const FunctionExpr& f, double k);
  friend FunctionExpr reflect(const FunctionExpr& f);
  friend FunctionExpr complement(const FunctionExpr& f);

 private:
  struct Atom {
    double coeff;
    Primitive kind;
    double scale;
    double shift;
    bool mirrored;
  };
  struct Product {
    double coeff;
    std::shared_ptr<const FunctionExpr> weight;
    std::shared_ptr<const FunctionExpr> base;
  };
  using Term = std::variant<Atom, Product>;

  FunctionExpr() = default;
  template <class AtomFn>
  FunctionExpr map_atoms(AtomFn&& fn) const;

  std::vector<Term> terms_;
};

/// a f + b g. Term lists are concatenated with the coefficients folded in.
FunctionExpr combine(double a, const FunctionExpr& f, double b, const FunctionExpr& g);
/// x -> f(x + c).
FunctionExpr shift(const FunctionExpr& f, double c);
/// x -> f(k x). Throws std::invalid_argument unless k > 0.
FunctionExpr dilate(const FunctionExpr& f, double k);
/// x -> f(-x).
FunctionExpr reflect(const FunctionExpr& f);

/// 1 - f. A lone unit Logistic atom maps to its reflection, which keeps
/// 1 - f strictly positive where f rounds to 1.
FunctionExpr complement(const FunctionExpr& f);

/// Scaled evaluation of a single primitive at y, derivatives taken in y.
ScaledSample eval_primitive(Primitive kind, double y);

/// log(sech y) without overflow.
double log_sech(double y) noexcept;

}  // namespace dwell
