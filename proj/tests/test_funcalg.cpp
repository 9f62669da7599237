#include <doctest.h>

#include <cmath>
#include <limits>

#include "dwell/funcalg.hpp"
#include "oracles.hpp"

using namespace dwell;

namespace {

const Primitive kAll[] = {Primitive::Sech, Primitive::Gaussian, Primitive::RosenMorseNu,
                          Primitive::Logistic};

double reference(Primitive p, double y) {
  switch (p) {
    case Primitive::Sech: return oracle::sech(y);
    case Primitive::Gaussian: return std::exp(-0.5 * y * y);
    case Primitive::RosenMorseNu: return std::exp(0.5 * y) * oracle::sech(y);
    case Primitive::Logistic: return 1.0 / (1.0 + std::exp(-y));
    case Primitive::Constant: return 1.0;
  }
  return 0.0;
}

}  // namespace

TEST_CASE("primitive values at the origin") {
  const auto s = FunctionExpr::primitive(Primitive::Sech).eval(0.0);
  CHECK(s.value == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(s.d1 == doctest::Approx(0.0));
  CHECK(s.d2 == doctest::Approx(-1.0).epsilon(1e-15));

  const auto g = FunctionExpr::primitive(Primitive::Gaussian).eval(0.0);
  CHECK(g.value == doctest::Approx(1.0));
  CHECK(g.d1 == doctest::Approx(0.0));
  CHECK(g.d2 == doctest::Approx(-1.0));

  const auto l = FunctionExpr::primitive(Primitive::Logistic).eval(0.0);
  CHECK(l.value == doctest::Approx(0.5));
  CHECK(l.d1 == doctest::Approx(0.25));
  CHECK(l.d2 == doctest::Approx(0.0));
}

TEST_CASE("chain rule picks up k^2") {
  const auto s = FunctionExpr::primitive(Primitive::Sech, 1.0, 2.0, 0.0).eval(0.0);
  CHECK(s.d2 == doctest::Approx(-4.0).epsilon(1e-15));
}

TEST_CASE("primitive values match reference formulas") {
  auto g = oracle::rng(1);
  for (Primitive p : kAll)
    for (int i = 0; i < 200; ++i) {
      const double y = oracle::uniform(g, -20.0, 20.0);
      CHECK(oracle::rel_err(FunctionExpr::primitive(p)(y), reference(p, y)) < 1e-13);
    }
}

TEST_CASE("derivatives agree with central differences") {
  auto g = oracle::rng(2);
  const double h = 1e-5;
  for (Primitive p : kAll) {
    const auto f = FunctionExpr::primitive(p, 1.3, 0.8, -0.4);
    for (int i = 0; i < 200; ++i) {
      const double x = oracle::uniform(g, -10.0, 10.0);
      const auto s = f.eval(x);
      const double fd1 = oracle::central_d1(f, x, h);
      const double scale = std::max({std::abs(s.value), std::abs(s.d1), 1e-300});
      CHECK(std::abs(s.d1 - fd1) / scale < 1e-6);
      const double fd2b = (f.eval(x + h).d1 - f.eval(x - h).d1) / (2.0 * h);
      CHECK(std::abs(s.d2 - fd2b) / std::max(scale, std::abs(s.d2)) < 1e-6);
    }
  }
}

TEST_CASE("combine is linear") {
  auto g = oracle::rng(3);
  const auto f = FunctionExpr::primitive(Primitive::Sech, 1.0, 1.0, 3.0);
  const auto h = FunctionExpr::primitive(Primitive::RosenMorseNu, 1.0, 0.6, -1.0);
  for (int i = 0; i < 300; ++i) {
    const double a = oracle::uniform(g, -3.0, 3.0), b = oracle::uniform(g, -3.0, 3.0);
    const double x = oracle::uniform(g, -10.0, 10.0);
    const auto c = combine(a, f, b, h).eval(x);
    const auto fx = f.eval(x), hx = h.eval(x);
    const double tol = 1e-14 * (std::abs(a) + std::abs(b) + 1.0);
    CHECK(std::abs(c.value - (a * fx.value + b * hx.value)) <= tol * (std::abs(fx.value) + std::abs(hx.value)) + 1e-300);
    CHECK(std::abs(c.d1 - (a * fx.d1 + b * hx.d1)) <= tol * (std::abs(fx.d1) + std::abs(hx.d1)) + 1e-300);
    CHECK(std::abs(c.d2 - (a * fx.d2 + b * hx.d2)) <= tol * (std::abs(fx.d2) + std::abs(hx.d2)) + 1e-300);
  }
}

TEST_CASE("combine identities") {
  const auto sech = FunctionExpr::primitive(Primitive::Sech);
  const auto gauss = FunctionExpr::primitive(Primitive::Gaussian);
  for (double x : {-7.0, -1.0, 0.0, 0.3, 5.0}) {
    CHECK(combine(1.0, sech, 0.0, gauss)(x) == doctest::Approx(sech(x)).epsilon(1e-15));
    CHECK(combine(0.5, sech, 0.5, sech)(x) == doctest::Approx(sech(x)).epsilon(1e-15));
  }
  const double a = 0.1, D = 3.0;
  const auto member = combine(a, shift(sech, -D), 1.0 - a, shift(sech, D));
  CHECK(member(0.0) == doctest::Approx(0.0993279274194332).epsilon(1e-14));
}

TEST_CASE("shift and dilate") {
  const auto sech = FunctionExpr::primitive(Primitive::Sech);
  for (double x : {-2.0, 0.0, 1.5}) {
    CHECK(shift(sech, 0.0)(x) == sech(x));
    CHECK(dilate(sech, 1.0)(x) == sech(x));
    CHECK(shift(sech, 0.7)(x) == doctest::Approx(oracle::sech(x + 0.7)).epsilon(1e-15));
  }
  const double D = 3.0, k = 0.7;
  CHECK(dilate(shift(sech, -D), k)(D / k) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK_THROWS_AS(dilate(sech, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(dilate(sech, -1.0), std::invalid_argument);
}

TEST_CASE("dilation chain rule") {
  auto g = oracle::rng(4);
  const auto f = combine(0.3, FunctionExpr::primitive(Primitive::Sech, 1.0, 1.0, -2.0), 0.7,
                         FunctionExpr::primitive(Primitive::Gaussian, 1.0, 1.0, 1.0));
  for (int i = 0; i < 200; ++i) {
    const double k = oracle::uniform(g, 0.1, 10.0), x = oracle::uniform(g, -3.0, 3.0);
    const auto d = dilate(f, k).eval(x);
    const auto base = f.eval(k * x);
    CHECK(oracle::rel_err(d.d2, k * k * base.d2) < 1e-13);
    CHECK(oracle::rel_err(d.d1, k * base.d1) < 1e-13);
  }
}

TEST_CASE("reflect and complement") {
  const auto nu = FunctionExpr::primitive(Primitive::RosenMorseNu, 1.0, 1.0, 0.4);
  const auto logistic = FunctionExpr::primitive(Primitive::Logistic);
  for (double x : {-30.0, -2.0, 0.0, 1.0, 45.0}) {
    const auto r = reflect(nu).eval(x), n = nu.eval(-x);
    CHECK(r.value == doctest::Approx(n.value).epsilon(1e-14));
    CHECK(r.d1 == doctest::Approx(-n.d1).epsilon(1e-14));
    CHECK(r.d2 == doctest::Approx(n.d2).epsilon(1e-14));
    CHECK(complement(logistic)(x) + logistic(x) == doctest::Approx(1.0).epsilon(1e-15));
  }
  // 1 - f stays positive where f rounds to 1.
  CHECK(complement(logistic)(60.0) > 0.0);
  const auto generic = complement(FunctionExpr::primitive(Primitive::Logistic, 0.5));
  CHECK(generic(0.0) == doctest::Approx(0.75));
}

TEST_CASE("product uses the Leibniz rule") {
  const auto w = FunctionExpr::primitive(Primitive::Logistic);
  const auto b = FunctionExpr::primitive(Primitive::Sech);
  const auto p = FunctionExpr::product(w, b);
  for (double x : {-3.0, 0.0, 0.8, 6.0}) {
    const auto s = p.eval(x), ws = w.eval(x), bs = b.eval(x);
    CHECK(s.value == doctest::Approx(ws.value * bs.value).epsilon(1e-14));
    CHECK(s.d1 == doctest::Approx(ws.d1 * bs.value + ws.value * bs.d1).epsilon(1e-13));
    CHECK(s.d2 == doctest::Approx(ws.d2 * bs.value + 2.0 * ws.d1 * bs.d1 + ws.value * bs.d2)
                      .epsilon(1e-13));
  }
}

TEST_CASE("far tails stay finite in scaled form") {
  const auto sech = FunctionExpr::primitive(Primitive::Sech);
  const auto s = sech.eval(800.0);
  CHECK(s.value == 0.0);
  CHECK(s.tail);
  const auto sc = sech.eval_scaled(800.0);
  CHECK(std::isfinite(sc.log_scale));
  CHECK(sc.curvature_ratio() == doctest::Approx(1.0));

  CHECK(!std::isnan(FunctionExpr::primitive(Primitive::RosenMorseNu).eval(-2000.0).value));
  CHECK(!std::isnan(FunctionExpr::primitive(Primitive::RosenMorseNu).eval(2000.0).value));
  const auto nu = FunctionExpr::primitive(Primitive::RosenMorseNu);
  CHECK(nu.eval_scaled(2000.0).curvature_ratio() == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(nu.eval_scaled(-2000.0).curvature_ratio() == doctest::Approx(2.25).epsilon(1e-12));
  CHECK(log_sech(1000.0) == doctest::Approx(std::log(2.0) - 1000.0));
}

TEST_CASE("zero value is a reported hazard") {
  CHECK_THROWS_AS(ScaledSample::zero().curvature_ratio(), NumericError);
}
