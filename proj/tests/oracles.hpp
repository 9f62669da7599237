#pragma once

// Reference formulas and crude numerics used only to cross-check the library.

#include <cmath>
#include <cstdint>
#include <functional>
#include <random>

namespace oracle {

inline double sech(double x) { return 1.0 / std::cosh(x); }

// alpha sech(k x - D) + (1 - alpha) sech(k x + D)
inline double family_psi(double k, double D, double a, double x) {
  return a * sech(k * x - D) + (1.0 - a) * sech(k * x + D);
}

// psi''/psi of the family, written out with sech'' = sech (1 - 2 sech^2).
inline double family_v(double k, double D, double a, double x) {
  const double s1 = sech(k * x - D), s0 = sech(k * x + D);
  const double num = a * s1 * (1.0 - 2.0 * s1 * s1) + (1.0 - a) * s0 * (1.0 - 2.0 * s0 * s0);
  return k * k * num / (a * s1 + (1.0 - a) * s0);
}

inline double q_closed(double D, double a) {
  const double c = 2.0 * a * (1.0 - a) * D / std::sinh(D);
  const double b = 1.0 - a;
  return (a * a * std::exp(D) + b * b * std::exp(-D) + c) /
         (a * a * std::exp(-D) + b * b * std::exp(D) + c);
}

inline double trapezoid(const std::function<double(double)>& f, double a, double b, int n) {
  const double h = (b - a) / n;
  double s = 0.5 * (f(a) + f(b));
  for (int i = 1; i < n; ++i) s += f(a + i * h);
  return s * h;
}

inline double central_d1(const std::function<double(double)>& f, double x, double h) {
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

inline double central_d2(const std::function<double(double)>& f, double x, double h) {
  return (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h);
}

inline double rel_err(double got, double want) {
  return std::abs(got - want) / std::max(std::abs(want), 1e-300);
}

inline std::mt19937_64 rng(std::uint64_t salt = 0) { return std::mt19937_64(20261015ULL + salt); }

inline double uniform(std::mt19937_64& g, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(g);
}

}  // namespace oracle
