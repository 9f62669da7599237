#pragma once

// Constructive certification that a family of potentials, pairwise closer
// than epsilon in sup norm, contains two members whose ground-state
// left/right mass quotients differ by more than a factor M.

#include <utility>
#include <vector>

#include "dwell/asymmetry.hpp"
#include "dwell/groundmap.hpp"

namespace dwell {

struct SensitivityConstants {
  double M = 0.0;
  double a_M = 0.0;
  double b_M = 0.0;
  double delta_M = 0.0;
  double alpha_M = 0.0;
  double D_M = 0.0;  // sech-family separation with e^{4 D_M} = M + 1
  double residual = 0.0;  // of (1 - d^2) a^2 / ((1 - a)^2 + d^2 + 2 d) = M + 1
};

/// Throws std::invalid_argument for M <= 0 and std::logic_error if the
/// computed constants violate 0 < delta_M < 1, 0 < alpha_M < 1 or leave a
/// residual above 1e-9.
SensitivityConstants sensitivity_constants(double M);

/// Lower bound of Q(alpha) / Q(1 - alpha) for a family whose well tails
/// carry mass below delta^2: [(1 - d^2) a^2 / ((1 - a)^2 + 2 d + d^2)]^2.
double quotient_ratio_lower_bound(double alpha, double delta);

/// Two-sided envelope of Q(alpha) for tail mass below delta^2.
struct QuotientBounds {
  double lower = 0.0;
  double upper = 0.0;
};
QuotientBounds quotient_bounds(double alpha, double delta);

struct SeparationResult {
  double delta = 0.0;
  double X_delta = 0.0;
  double tail_mass_left_of_0_for_right_well = 0.0;   // integral_{-inf}^0 phi1(x - X)^2
  double tail_mass_right_of_0_for_left_well = 0.0;   // integral_0^inf phi0(x + X)^2
};

/// Smallest X (doubling, then bisection) with both cross-origin tail masses
/// below delta^2. Both states must be normalized. Throws NumericError when no
/// X <= 1e4 works.
SeparationResult find_separation(const GroundState& phi0, const GroundState& phi1, double delta,
                                 const QuadratureConfig& cfg = {});

/// The unscaled family alpha phi1(x - X) + (1 - alpha) phi0(x + X).
struct WellFamily {
  GroundState phi0;
  GroundState phi1;
  double X = 0.0;

  ConvexFamilySpec spec(double alpha, double k = 1.0) const {
    return ConvexFamilySpec{phi0, phi1, alpha, X, k};
  }
  GroundState member(double alpha, double k = 1.0) const;
  Potential potential(double alpha, double k = 1.0) const;
};

/// alpha sample {0.05, 0.10, ..., 0.95}.
std::vector<double> default_alpha_sample();

/// Largest pairwise sup distance among the members at `alphas` on `grid`,
/// with one 10x refinement pass around the maximizer.
SupDistanceReport family_spread(const WellFamily& family, const std::vector<double>& alphas,
                                double k, const Grid& grid, Exec exec = Exec::Parallel);

struct CertificationReport {
  double epsilon = 0.0;
  double M = 0.0;
  double C_M = 0.0;
  double K = 0.0;
  double alpha_M = 0.0;
  double beta_M = 0.0;
  double measured_sup = 0.0;
  double q_alpha = 0.0;
  double q_beta = 0.0;
  double q_ratio = 0.0;
  bool pass_eps = false;
  bool pass_M = false;

  bool operator==(const CertificationReport&) const = default;
};

struct CertificationTrace {
  SensitivityConstants constants;
  SeparationResult separation;
  double raw_spread = 0.0;        // sampled sup before the safety factor
  double q_ratio_unscaled = 0.0;  // same ratio before the K dilation
};

inline constexpr double kEnvelopeSafetyFactor = 1.1;
inline constexpr double kMaxDilation = 1e3;

/// Full pipeline: constants, separation, envelope C_M, K = sqrt(eps / C_M),
/// dilation by K, and measurement of the sup distance and the Q ratio.
/// Stage failures propagate as NumericError with the stage name.
CertificationReport certify_family(double epsilon, double M,
                                   const std::pair<GroundState, GroundState>& pair,
                                   CertificationTrace* trace = nullptr);

/// D_M for the sech family and the first alpha = 1 - 2^-j whose closed-form
/// ratio Q(alpha) / Q(1 - alpha) exceeds M.
struct SechShortcut {
  double D_M = 0.0;
  double alpha = 0.0;
  double ratio = 0.0;
};
SechShortcut sech_shortcut(double M);

}  // namespace dwell
