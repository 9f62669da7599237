// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "dwell/asymmetry.hpp"
#include "dwell/certify.hpp"
#include "dwell/spectral.hpp"
#include "oracles.hpp"

using namespace dwell;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;
};

class Detail {
 public:
  template <class T>
  Detail& operator<<(const T& v) {
    s_ << v;
    return *this;
  }
  std::string str() const { return s_.str(); }

 private:
  std::ostringstream s_;
};

std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> x(n);
  for (int i = 0; i < n; ++i) x[i] = lo + (hi - lo) * i / (n - 1);
  return x;
}

ConvexFamilySpec sech_spec(double k, double D, double a) {
  return {GroundState::sech(), GroundState::sech(), a, D, k};
}

Outcome mapping() {
  const Potential vs = to_potential(GroundState::sech());
  const Potential vr = to_potential(GroundState::rosen_morse());
  const Potential vm = to_potential(GroundState::from_expr(reflect(GroundState::rosen_morse().expr())));
  double es = 0.0, er = 0.0, minus = 0.0, mirrored = 0.0;
  for (double x : linspace(-10.0, 10.0, 2001)) {
    const double s = oracle::sech(x);
    es = std::max(es, std::abs(vs.generic(x) - (1.0 - 2.0 * s * s)));
    er = std::max(er, std::abs(vr.generic(x) - (1.25 - 2.0 * s * s + std::tanh(x))));
    minus = std::max(minus, std::abs(vr.generic(x) - (1.25 - 2.0 * s * s - std::tanh(x))));
    mirrored = std::max(mirrored, std::abs(vm.generic(x) - (1.25 - 2.0 * s * s + std::tanh(x))));
  }
  // The stated +tanh target is the potential of exp(-x/2) sech x, not of
  // exp(x/2) sech x; the minus-sign form and the mirrored pairing are reported.
  return {es < 1e-10 && er < 1e-10,
          (Detail() << "max err soliton " << es << ", exp(x/2)sech x vs +tanh target " << er
                    << " (vs -tanh form " << minus << "; exp(-x/2)sech x vs +tanh " << mirrored << ")")
              .str()};
}

Outcome family_identity() {
  const double combos[12][3] = {{1, 3, 0.5}, {1, 3, 0.1}, {0.7, 3, 0.5}, {0.7, 3, 0.1},
                                {1, 1, 0.3}, {1, 2, 0.7}, {2, 0.5, 0.9}, {0.2, 4, 0.25},
                                {5, 2, 0.6}, {0.5, 5, 0.05}, {3, 1.5, 0.95}, {1.3, 0.1, 0.4}};
  double worst = 0.0;
  for (const auto& c : combos) {
    const Potential closed = convex_potential(sech_spec(c[0], c[1], c[2]));
    const Potential mapped = to_potential(convex_state(sech_spec(c[0], c[1], c[2])));
    for (double x : linspace(-40.0, 40.0, 4001)) worst = std::max(worst, std::abs(closed(x) - mapped.generic(x)));
  }
  return {worst < 1e-10, (Detail() << "12 combos, max diff " << worst).str()};
}

Outcome quotient_dual() {
  double worst = 0.0;
  for (double D : {1.0, 2.0, 3.0, 4.0})
    for (int i = 1; i <= 9; ++i) {
      const double a = 0.1 * i;
      worst = std::max(worst, oracle::rel_err(q_quotient(sech_family_state(1.0, D, a)).q,
                                              q_closed_form_sech(1.0, D, a)));
    }
  const double half = std::abs(q_quotient(sech_family_state(1.0, 3.0, 0.5)).q - 1.0);
  return {worst < 1e-8 && half < 1e-10,
          (Detail() << "36 points, max rel err " << worst << ", |Q(0.5) - 1| " << half).str()};
}

Outcome headline() {
  const auto t0 = std::chrono::steady_clock::now();
  const CertificationReport r = certify_family(0.01, 100.0, {GroundState::sech(), GroundState::sech()});
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return {r.measured_sup < 0.01 && r.q_ratio > 100.0 && r.pass_eps && r.pass_M && secs < 10.0,
          (Detail() << "sup " << r.measured_sup << ", Q ratio " << r.q_ratio << ", K " << r.K << ", "
                    << secs << " s")
              .str()};
}

Outcome constants_check() {
  bool ok = true;
  Detail d;
  const GroundState s = normalize(GroundState::sech());
  for (double M : {1.0, 10.0, 100.0}) {
    const SensitivityConstants c = sensitivity_constants(M);
    const WellFamily fam{s, s, find_separation(s, s, c.delta_M).X_delta};
    const double ratio = q_quotient(fam.member(c.alpha_M)).q / q_quotient(fam.member(1.0 - c.alpha_M)).q;
    const bool here = c.delta_M > 0 && c.delta_M < 1 && c.alpha_M > 0 && c.alpha_M < 1 &&
                      std::abs(c.residual) < 1e-9 && ratio > (M + 1) * (M + 1);
    ok = ok && here;
    d << "M=" << M << ": ratio " << ratio << " vs " << (M + 1) * (M + 1) << "; ";
  }
  return {ok, d.str()};
}

Outcome scaling() {
  double q_err = 0.0;
  const GroundState base = normalize(sech_family_state(1.0, 3.0, 0.1));
  const double q0 = q_quotient(base).q;
  for (double k : {0.2, 0.7, 1.0, 5.0}) q_err = std::max(q_err, oracle::rel_err(q_quotient(scale_state(base, k)).q, q0));

  double v_err = 0.0;
  const Potential V = to_potential(base);
  for (double k : {0.2, 0.7, 1.0, 5.0}) {
    const Potential Vk = scale_potential(V, k);
    for (double x : linspace(-20.0, 20.0, 801)) v_err = std::max(v_err, std::abs(Vk(x) - k * k * V(k * x)));
  }

  bool bound = true;
  double worst_frac = 0.0;
  for (double k : {0.7, 1.0}) {
    const Grid grid = default_sup_grid(3.0, k);
    std::vector<Potential> members;
    for (double a : {0.05, 0.1, 0.3, 0.5, 0.7, 0.9, 0.95}) members.push_back(convex_potential(sech_spec(k, 3.0, a)));
    for (std::size_t i = 0; i < members.size(); ++i)
      for (std::size_t j = i + 1; j < members.size(); ++j) {
        const double s = sup_distance(members[i], members[j], grid).sup_estimate;
        worst_frac = std::max(worst_frac, s / (k * k));
        bound = bound && s < 4.0 * k * k;
      }
  }
  return {q_err < 1e-10 && v_err < 1e-12 && bound,
          (Detail() << "Q rel err " << q_err << ", V_[k] err " << v_err << ", max sup/k^2 " << worst_frac).str()};
}

Outcome limit() {
  const double r = q_closed_form_sech(1.0, 3.0, 0.999) / q_closed_form_sech(1.0, 3.0, 0.001);
  const double rq = q_quotient(sech_family_state(1.0, 3.0, 0.999)).q / q_quotient(sech_family_state(1.0, 3.0, 0.001)).q;
  const double lim = q_ratio_limit(3.0);
  const double off = std::abs(r / lim - 1.0);
  return {off < 0.05 && std::abs(rq / lim - 1.0) < 0.05,
          (Detail() << "ratio " << r << " (quadrature " << rq << ") vs e^12 " << lim << ", off " << off * 100 << "%").str()};
}

Outcome spectral() {
  const GroundState psi = sech_family_state(1.0, 3.0, 0.5);
  const Grid box = Grid::make(-39.0, 39.0, 6000);
  const SpectralResult r = low_spectrum(to_potential(psi), box, 2);
  const double overlap = grid_overlap(r.eigenvectors[0], box, psi);

  const SpectralResult osc = low_spectrum(to_potential(GroundState::gaussian()), Grid::make(-20.0, 20.0, 4000), 2);

  auto gap = [](double D) {
    const SpectralResult s = low_spectrum(to_potential(sech_family_state(1.0, D, 0.5)), default_box(D, 1.0), 2);
    return s.eigenvalues[1] - s.eigenvalues[0];
  };
  const double g3 = gap(3.0), g5 = gap(5.0);

  const GroundState L = GroundState::from_expr(FunctionExpr::primitive(Primitive::Sech, 1.0, 1.0, 3.0));
  const GroundState R = GroundState::from_expr(FunctionExpr::primitive(Primitive::Sech, 1.0, 1.0, -3.0));
  const TwoLevelFit fit = two_level_fit(r.eigenvectors[1], box, L, R);

  const bool ok = std::abs(r.eigenvalues[0]) < 1e-4 && overlap > 0.9999 &&
                  std::abs(osc.eigenvalues[1] - 2.0) < 1e-4 && g5 < g3 && fit.overlap_e1 > 0.99;
  return {ok, (Detail() << "E0 " << r.eigenvalues[0] << ", overlap " << overlap << ", osc E1 "
                        << osc.eigenvalues[1] << ", gap D=3 " << g3 << " > D=5 " << g5
                        << ", two-level " << fit.overlap_e1)
                  .str()};
}

std::vector<std::vector<double>> run_csv(const char* cmd) {
  const char* argv[] = {"dwell", cmd};
  std::ostringstream out, err;
  if (cli::run(2, argv, out, err) != 0) throw std::runtime_error(err.str());
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    std::istringstream l(line);
    std::string cell;
    std::vector<double> row;
    while (std::getline(l, cell, ',')) row.push_back(std::stod(cell));
    rows.push_back(row);
  }
  return rows;
}

Outcome figures() {
  const double ks[] = {1.0, 1.0, 0.7, 0.7}, as[] = {0.5, 0.1, 0.5, 0.1};
  const auto f1 = run_csv("figure1");
  double curve_err = 0.0, sym = 0.0;
  bool bounded = f1.size() == 2401 && f1.front().size() == 5;
  for (std::size_t i = 0; i < f1.size(); ++i) {
    for (int c = 0; c < 4; ++c) {
      curve_err = std::max(curve_err, std::abs(f1[i][c + 1] - oracle::family_v(ks[c], 3.0, as[c], f1[i][0])));
      bounded = bounded && std::abs(f1[i][c + 1] - ks[c] * ks[c]) <= 2.0 * ks[c] * ks[c];
    }
    for (int c : {1, 3}) sym = std::max(sym, std::abs(f1[i][c] - f1[f1.size() - 1 - i][c]));
  }

  const auto f2 = run_csv("figure2");
  const double h = f2[1][0] - f2[0][0];
  const std::size_t mid = f2.size() / 2;
  double norm_err = 0.0, parity = 0.0, right_err = 0.0;
  for (int c = 1; c <= 4; ++c) {
    double total = 0.0, left = 0.0, right = 0.0;
    for (std::size_t i = 0; i < f2.size(); ++i) {
      total += (i == 0 || i + 1 == f2.size() ? 0.5 : 1.0) * f2[i][c];
      if (i <= mid) left += (i == 0 || i == mid ? 0.5 : 1.0) * f2[i][c];
      if (i >= mid) right += (i == mid || i + 1 == f2.size() ? 0.5 : 1.0) * f2[i][c];
    }
    norm_err = std::max(norm_err, std::abs(h * total - 1.0));
    if (as[c - 1] == 0.5) parity = std::max(parity, h * std::abs(left - right));
    if (c == 2) {
      const double q = q_closed_form_sech(1.0, 3.0, 0.1);
      right_err = std::abs(h * right - q / (1.0 + q));
    }
  }
  const bool ok = bounded && curve_err < 1e-10 && sym < 1e-12 && f2.front().size() == 5 && norm_err < 1e-6 &&
                  parity < 1e-9 && right_err < 1e-6;
  return {ok, (Detail() << "fig1 curve err " << curve_err << ", symmetry " << sym << "; fig2 norm err "
                        << norm_err << ", parity " << parity << ", right-mass err " << right_err)
                  .str()};
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<Outcome()>> criteria[] = {
      {"mapping correctness", mapping},       {"family identity", family_identity},
      {"quotient dual oracle", quotient_dual}, {"headline certification", headline},
      {"sensitivity constants", constants_check},   {"scaling laws", scaling},
      {"limit behaviour", limit},             {"spectral oracle", spectral},
      {"figure reproduction", figures}};
  int failures = 0;
  int index = 1;
  for (const auto& [name, check] : criteria) {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s %d %s: %s [%.2f s]\n", o.ok ? "PASS" : "FAIL", index, name, o.detail.c_str(), secs);
    failures += o.ok ? 0 : 1;
    ++index;
  }
  std::fflush(stdout);
  return failures == 0 ? 0 : 1;
}
