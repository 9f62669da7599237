#pragma once

// Positive ground states, the zero-energy potentials they induce
// (V = psi'' / psi), convex double-well families built from two states, the
// weighted decomposition of a state, and the dilation psi -> sqrt(k) psi(kx).

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <variant>

#include "dwell/funcalg.hpp"
#include "dwell/quadrature.hpp"

namespace dwell {

/// Shapes with a known potential. A hint on a state means
/// state == c * shape for some constant c > 0.
namespace shape {
struct Soliton {  // sech(k x), V = k^2 (1 - 2 sech^2(k x))
  double k = 1.0;
};
struct Gaussian {  // exp(-(k x)^2 / 2), V = k^2 ((k x)^2 - 1)
  double k = 1.0;
};
struct RosenMorse {  // nu(k x), V = k^2 (5/4 - 2 sech^2(k x) - tanh(k x))
  double k = 1.0;
};
struct SechFamily {  // alpha sech(k x - D) + (1 - alpha) sech(k x + D)
  double k = 1.0;
  double D = 0.0;
  double alpha = 0.5;
};
}  // namespace shape

using ShapeHint =
    std::variant<std::monostate, shape::Soliton, shape::Gaussian, shape::RosenMorse, shape::SechFamily>;

struct ConvexFamilySpec;

/// Standard grid for positivity and identity checks.
inline constexpr double kValidationHalfWidth = 40.0;
inline constexpr std::size_t kValidationPoints = 4001;

class GroundState {
 public:
  /// Validates positivity on the standard grid and square-integrability, and
  /// checks any shape hint against the expression. Throws
  /// std::invalid_argument or NumericError.
  static GroundState from_expr(FunctionExpr expr, ShapeHint hint = {});

  static GroundState sech();
  static GroundState gaussian();
  static GroundState rosen_morse();

  const FunctionExpr& expr() const noexcept { return expr_; }
  bool normalized() const noexcept { return normalized_; }
  std::optional<double> cached_norm2() const noexcept { return norm2_; }
  const ShapeHint& hint() const noexcept { return hint_; }
  /// The constant c in state == c * shape (1 when there is no hint).
  double hint_scale() const noexcept { return hint_scale_; }

  double operator()(double x) const { return expr_.eval(x).value; }
  C2Sample eval(double x) const { return expr_.eval(x); }

 private:
  GroundState(FunctionExpr expr, ShapeHint hint, double hint_scale, bool normalized,
              std::optional<double> norm2)
      : expr_(std::move(expr)),
        hint_(hint),
        hint_scale_(hint_scale),
        normalized_(normalized),
        norm2_(norm2) {}

  friend GroundState normalize(const GroundState&, const QuadratureConfig&);
  friend GroundState scale_state(const GroundState&, double);
  friend GroundState convex_state(const ConvexFamilySpec&);

  FunctionExpr expr_;
  ShapeHint hint_;
  double hint_scale_ = 1.0;
  bool normalized_ = false;
  std::optional<double> norm2_;
};

/// V = psi'' / psi for a ground state. Evaluation prefers an exact closed form
/// when one is known; `generic` always goes through psi'' / psi.
class Potential {
 public:
  const GroundState& source() const noexcept { return source_; }
  double operator()(double x) const;
  double generic(double x) const;
  bool has_closed_form() const noexcept { return form_.index() != 0; }
  std::string form_name() const;

 private:
  struct Blend {
    std::shared_ptr<const Potential> v0, v1;
    FunctionExpr w0, w1;  // (1 - alpha) psi0(k x + X) and alpha psi1(k x - X)
    double k, X;
  };
  struct Dilated {
    std::shared_ptr<const Potential> inner;
    double k;
  };
  using Form = std::variant<std::monostate, shape::Soliton, shape::Gaussian, shape::RosenMorse,
                            shape::SechFamily, Blend, Dilated>;

  Potential(GroundState source, Form form) : source_(std::move(source)), form_(std::move(form)) {}

  friend Potential to_potential(const GroundState&);
  friend Potential blend_potential(const ConvexFamilySpec&);
  friend Potential scale_potential(const Potential&, double);

  GroundState source_;
  Form form_;
};

/// Member of the convex family: dilate(alpha psi1(x - X) + (1 - alpha) psi0(x + X), k).
struct ConvexFamilySpec {
  GroundState psi0;
  GroundState psi1;
  double alpha = 0.5;
  double separation = 0.0;
  double scale = 1.0;

  /// Throws std::invalid_argument unless 0 < alpha < 1, X >= 0, k > 0.
  void validate() const;
};

Potential to_potential(const GroundState& psi);

GroundState convex_state(const ConvexFamilySpec& spec);

/// Family potential, closed form for a matched sech pair and the weighted
/// average ((1-a) V0 psi0 + a V1 psi1) / ((1-a) psi0 + a psi1) otherwise.
Potential convex_potential(const ConvexFamilySpec& spec);

/// Always the weighted-average form, even when a closed form exists.
Potential blend_potential(const ConvexFamilySpec& spec);

/// phi0 = 2 f Phi and phi1 = 2 (1 - f) Phi, so (phi0 + phi1) / 2 == Phi.
/// Rejects weights that reach 0 or 1 on the validation grid.
std::pair<GroundState, GroundState> decompose(const GroundState& Phi, const FunctionExpr& weight);

/// sqrt(k) psi(k x). Normalization is preserved.
GroundState scale_state(const GroundState& psi, double k);

/// k^2 V(k x).
Potential scale_potential(const Potential& V, double k);

/// Integral of psi^2 over the real line (cached value when known).
double squared_norm(const GroundState& psi, const QuadratureConfig& cfg = {});

/// psi / sqrt(integral psi^2). Idempotent.
GroundState normalize(const GroundState& psi, const QuadratureConfig& cfg = {});

/// alpha sech(k x - D) + (1 - alpha) sech(k x + D).
GroundState sech_family_state(double k, double D, double alpha);

}  // namespace dwell
