#include "dwell/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace dwell {

const char* to_string(SpectralMethod m) noexcept {
  switch (m) {
    case SpectralMethod::FD3: return "FD3";
  }
  return "?";
}

TridiagonalOperator discretize(const RealFn& V, const Grid& grid, Exec exec) {
  if (grid.n < 3) throw std::invalid_argument("discretize: grid needs at least 3 points");
  const double h = grid.spacing();
  const double inv_h2 = 1.0 / (h * h);
  const std::vector<double> v = sample(V, grid, exec);

  TridiagonalOperator op;
  op.grid = grid;
  const std::size_t m = grid.n - 2;
  op.diag.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    if (!std::isfinite(v[i + 1])) {
      std::ostringstream msg;
      msg << "potential is not finite at x = " << grid.at(i + 1);
      throw NumericError("discretize", msg.str());
    }
    op.diag[i] = 2.0 * inv_h2 + v[i + 1];
  }
  op.off.assign(m - 1, -inv_h2);
  return op;
}

TridiagonalOperator discretize(const Potential& V, const Grid& grid, Exec exec) {
  return discretize(
      [&V](double x) {
        try {
          return V.generic(x);
        } catch (const NumericError& e) {
          std::ostringstream msg;
          msg << "potential evaluation failed at x = " << x << " (" << e.what() << ")";
          throw NumericError("discretize", msg.str());
        }
      },
      grid, exec);
}

namespace {

// LU factorization with partial pivoting of a general tridiagonal matrix
// (lower dl, diagonal d, upper du), same scheme as LAPACK dgttrf/dgttrs.
class TridiagonalLU {
 public:
  TridiagonalLU(std::vector<double> dl, std::vector<double> d, std::vector<double> du)
      : dl_(std::move(dl)), d_(std::move(d)), du_(std::move(du)), du2_(d_.size(), 0.0),
        swapped_(d_.size(), false) {
    const std::size_t n = d_.size();
    double scale = 0.0;
    for (double x : d_) scale = std::max(scale, std::abs(x));
    for (double x : du_) scale = std::max(scale, std::abs(x));
    tiny_ = std::numeric_limits<double>::epsilon() * std::max(scale, 1.0);
    for (std::size_t i = 0; i + 1 < n; ++i) {
      if (std::abs(d_[i]) >= std::abs(dl_[i])) {
        if (d_[i] == 0.0) d_[i] = tiny_;
        const double fact = dl_[i] / d_[i];
        dl_[i] = fact;
        d_[i + 1] -= fact * du_[i];
      } else {
        const double fact = d_[i] / dl_[i];
        d_[i] = dl_[i];
        dl_[i] = fact;
        const double temp = du_[i];
        du_[i] = d_[i + 1];
        d_[i + 1] = temp - fact * d_[i + 1];
        if (i + 2 < n) {
          du2_[i] = du_[i + 1];
          du_[i + 1] = -fact * du_[i + 1];
        }
        swapped_[i] = true;
      }
    }
    for (double& x : d_)
      if (x == 0.0) x = tiny_;
  }

  void solve(std::vector<double>& b) const {
    const std::size_t n = d_.size();
    for (std::size_t i = 0; i + 1 < n; ++i) {
      if (!swapped_[i]) {
        b[i + 1] -= dl_[i] * b[i];
      } else {
        const double temp = b[i];
        b[i] = b[i + 1];
        b[i + 1] = temp - dl_[i] * b[i];
      }
    }
    b[n - 1] /= d_[n - 1];
    if (n > 1) b[n - 2] = (b[n - 2] - du_[n - 2] * b[n - 1]) / d_[n - 2];
    for (std::size_t i = n - 2; i-- > 0;)
      b[i] = (b[i] - du_[i] * b[i + 1] - du2_[i] * b[i + 2]) / d_[i];
  }

 private:
  std::vector<double> dl_, d_, du_, du2_;
  std::vector<bool> swapped_;
  double tiny_ = 0.0;
};

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

void scale_to_unit(std::vector<double>& v) {
  const double n = std::sqrt(dot(v, v));
  for (double& x : v) x /= n;
}

std::vector<double> inverse_iteration(const TridiagonalOperator& op, double lambda,
                                      const std::vector<std::vector<double>>& previous,
                                      const EigenSolverOptions& opts) {
  const std::size_t m = op.diag.size();
  std::vector<double> d(op.diag);
  for (double& x : d) x -= lambda;
  const TridiagonalLU lu(op.off, std::move(d), op.off);

  std::vector<double> v(m);
  for (std::size_t i = 0; i < m; ++i) v[i] = 1.0 + 0.25 * std::sin(0.37 * static_cast<double>(i));
  auto deflate = [&](std::vector<double>& y) {
    for (const auto& p : previous) {
      const double c = dot(y, p);
      for (std::size_t i = 0; i < m; ++i) y[i] -= c * p[i];
    }
  };
  deflate(v);
  scale_to_unit(v);

  for (int it = 0; it < opts.max_iterations; ++it) {
    std::vector<double> y = v;
    lu.solve(y);
    deflate(y);
    scale_to_unit(y);
    if (dot(y, v) < 0.0)
      for (double& x : y) x = -x;
    double change = 0.0;
    for (std::size_t i = 0; i < m; ++i) change = std::max(change, std::abs(y[i] - v[i]));
    v = std::move(y);
    if (change < 1e-13) return v;
  }
  std::ostringstream msg;
  msg << "inverse iteration for eigenvalue " << lambda << " did not settle within "
      << opts.max_iterations << " iterations";
  throw NumericError("eigensolver", msg.str());
}

}  // namespace

SpectralResult low_spectrum(const TridiagonalOperator& op, std::size_t count,
                            const EigenSolverOptions& opts, Exec exec) {
  if (count < 1 || count > op.diag.size())
    throw std::invalid_argument("low_spectrum: count must be in [1, interior points]");
  const BisectionResult bis =
      bisect_lowest(op.diag, op.off, count, opts.eigenvalue_tol, opts.max_iterations, exec);
  if (!bis.converged) {
    std::ostringstream msg;
    msg << "bisection did not reach " << opts.eigenvalue_tol << " within " << opts.max_iterations
        << " iterations";
    throw NumericError("eigensolver", msg.str());
  }

  SpectralResult r;
  r.grid = op.grid;
  r.eigenvalues = bis.eigenvalues;
  const double h = op.grid.spacing();
  std::vector<std::vector<double>> unit;
  for (std::size_t k = 0; k < count; ++k) {
    std::vector<double> v = inverse_iteration(op, bis.eigenvalues[k], unit, opts);
    unit.push_back(v);

    // Largest entry positive; embed with Dirichlet zeros; h sum v^2 = 1.
    const auto big = std::max_element(v.begin(), v.end(),
                                      [](double a, double b) { return std::abs(a) < std::abs(b); });
    const double sign = *big < 0.0 ? -1.0 : 1.0;
    std::vector<double> full(op.grid.n, 0.0);
    const double s = sign / std::sqrt(h);
    for (std::size_t i = 0; i < v.size(); ++i) full[i + 1] = s * v[i];
    r.eigenvectors.push_back(std::move(full));
  }
  return r;
}

SpectralResult low_spectrum(const Potential& V, const Grid& grid, std::size_t count,
                            const EigenSolverOptions& opts, Exec exec) {
  return low_spectrum(discretize(V, grid, exec), count, opts, exec);
}

Grid default_box(double D, double k) {
  if (!(k > 0.0)) throw std::invalid_argument("k must be > 0");
  const double w = 30.0 + 3.0 * std::abs(D) / k;
  return Grid::make(-w, w, 6000);
}

double grid_overlap(const std::vector<double>& v, const Grid& grid, const GroundState& psi) {
  if (v.size() != grid.n) throw std::invalid_argument("grid_overlap: size mismatch");
  const std::vector<double> p = sample([&psi](double x) { return psi(x); }, grid, Exec::Serial);
  const double h = grid.spacing();
  return std::abs(h * dot(v, p)) / std::sqrt(h * dot(p, p));
}

std::size_t sign_changes(const std::vector<double>& v, double rel_floor) {
  double peak = 0.0;
  for (double x : v) peak = std::max(peak, std::abs(x));
  const double floor = rel_floor * peak;
  std::size_t changes = 0;
  int last = 0;
  for (double x : v) {
    if (std::abs(x) <= floor) continue;
    const int s = x > 0.0 ? 1 : -1;
    if (last != 0 && s != last) ++changes;
    last = s;
  }
  return changes;
}

TwoLevelFit two_level_fit(const std::vector<double>& excited, const Grid& grid,
                          const GroundState& left, const GroundState& right) {
  if (excited.size() != grid.n) throw std::invalid_argument("two_level_fit: size mismatch");
  const std::vector<double> L = sample([&left](double x) { return left(x); }, grid, Exec::Serial);
  const std::vector<double> R = sample([&right](double x) { return right(x); }, grid, Exec::Serial);
  const double h = grid.spacing();
  const double ll = h * dot(L, L), rr = h * dot(R, R), lr = h * dot(L, R);
  const double det = ll * rr - lr * lr;
  if (!(det > 1e-10 * ll * rr))
    throw std::invalid_argument("two_level_fit: well states are linearly dependent (coincident wells)");
  const double bl = h * dot(L, excited), br = h * dot(R, excited);
  const double cl = (rr * bl - lr * br) / det;
  const double cr = (ll * br - lr * bl) / det;
  const double vv = h * dot(excited, excited);
  return {cl, -cr, std::sqrt(std::max(0.0, (cl * bl + cr * br) / vv))};
}

TwoLevelFit two_level_check(const Potential& V, const GroundState& left, const GroundState& right,
                            const Grid& grid) {
  // Reject coincident wells before paying for the eigensolve.
  two_level_fit(std::vector<double>(grid.n, 0.0), grid, left, right);
  const SpectralResult s = low_spectrum(V, grid, 2);
  return two_level_fit(s.eigenvectors[1], grid, left, right);
}

}  // namespace dwell
