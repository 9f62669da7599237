#include "dwell/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <stdexcept>

namespace dwell {

Grid Grid::make(double x_min, double x_max, std::size_t n) {
  if (!(x_min < x_max) || !std::isfinite(x_min) || !std::isfinite(x_max))
    throw std::invalid_argument("grid requires finite x_min < x_max");
  if (n < 3) throw std::invalid_argument("grid requires at least 3 points");
  return Grid{x_min, x_max, n};
}

double Grid::at(std::size_t i) const noexcept {
  // Pin the last point exactly to x_max.
  if (i + 1 == n) return x_max;
  return x_min + static_cast<double>(i) * spacing();
}

std::vector<double> Grid::points() const {
  std::vector<double> xs(n);
  for (std::size_t i = 0; i < n; ++i) xs[i] = at(i);
  return xs;
}

std::vector<double> sample(const RealFn& f, const Grid& grid, Exec exec) {
  const auto n = static_cast<std::ptrdiff_t>(grid.n);
  std::vector<double> out(grid.n);
  if (exec == Exec::Serial) {
    for (std::ptrdiff_t i = 0; i < n; ++i) out[i] = f(grid.at(i));
    return out;
  }
  // Exceptions may not cross the parallel region boundary.
  std::exception_ptr failure;
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    try {
      out[i] = f(grid.at(i));
    } catch (...) {
#pragma omp critical(dwell_sample_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

namespace {

ArgMax better(ArgMax a, ArgMax b) {
  if (b.value > a.value || (b.value == a.value && b.index < a.index)) return b;
  return a;
}

}  // namespace

ArgMax max_abs_difference(std::span<const double> a, std::span<const double> b, Exec exec) {
  if (a.size() != b.size() || a.empty())
    throw std::invalid_argument("max_abs_difference: size mismatch or empty input");
  const auto n = static_cast<std::ptrdiff_t>(a.size());
  ArgMax best{-1.0, 0};
  if (exec == Exec::Serial) {
    for (std::ptrdiff_t i = 0; i < n; ++i) {
      const double d = std::abs(a[i] - b[i]);
      if (d > best.value) best = {d, static_cast<std::size_t>(i)};
    }
    return best;
  }
#pragma omp parallel
  {
    ArgMax local{-1.0, 0};
#pragma omp for schedule(static) nowait
    for (std::ptrdiff_t i = 0; i < n; ++i) {
      const double d = std::abs(a[i] - b[i]);
      if (d > local.value) local = {d, static_cast<std::size_t>(i)};
    }
#pragma omp critical(dwell_maxdiff)
    best = better(best, local);
  }
  return best;
}

ArgMax max_spread(std::span<const std::vector<double>> columns, Exec exec) {
  if (columns.empty()) throw std::invalid_argument("max_spread: no columns");
  const std::size_t len = columns.front().size();
  for (const auto& c : columns)
    if (c.size() != len) throw std::invalid_argument("max_spread: ragged columns");
  const auto n = static_cast<std::ptrdiff_t>(len);
  auto spread_at = [&](std::size_t i) {
    double lo = columns[0][i], hi = columns[0][i];
    for (const auto& c : columns) {
      lo = std::min(lo, c[i]);
      hi = std::max(hi, c[i]);
    }
    return hi - lo;
  };
  ArgMax best{-1.0, 0};
  if (exec == Exec::Serial) {
    for (std::ptrdiff_t i = 0; i < n; ++i) {
      const double d = spread_at(static_cast<std::size_t>(i));
      if (d > best.value) best = {d, static_cast<std::size_t>(i)};
    }
    return best;
  }
#pragma omp parallel
  {
    ArgMax local{-1.0, 0};
#pragma omp for schedule(static) nowait
    for (std::ptrdiff_t i = 0; i < n; ++i) {
      const double d = spread_at(static_cast<std::size_t>(i));
      if (d > local.value) local = {d, static_cast<std::size_t>(i)};
    }
#pragma omp critical(dwell_spread)
    best = better(best, local);
  }
  return best;
}

std::size_t sturm_count(std::span<const double> diag, std::span<const double> off, double x) {
  const std::size_t n = diag.size();
  // Pivot floor as in LAPACK dstebz: small enough not to bias the count,
  // large enough that off^2 / pivmin stays finite.
  double max_off2 = 1.0;
  for (double e : off) max_off2 = std::max(max_off2, e * e);
  const double pivmin = std::numeric_limits<double>::min() * max_off2;
  std::size_t count = 0;
  double q = diag[0] - x;
  for (std::size_t i = 0;; ++i) {
    if (std::abs(q) <= pivmin) q = -pivmin;
    if (q <= 0.0) ++count;
    if (i + 1 == n) break;
    q = diag[i + 1] - x - off[i] * off[i] / q;
  }
  return count;
}

BisectionResult bisect_lowest(std::span<const double> diag, std::span<const double> off,
                              std::size_t count, double abs_tol, int max_iterations,
                              Exec exec) {
  const std::size_t n = diag.size();
  if (n == 0 || off.size() + 1 != n)
    throw std::invalid_argument("bisect_lowest: inconsistent tridiagonal sizes");
  if (count == 0 || count > n) throw std::invalid_argument("bisect_lowest: bad eigenvalue count");

  // Gershgorin enclosure.
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = (i > 0 ? std::abs(off[i - 1]) : 0.0) + (i + 1 < n ? std::abs(off[i]) : 0.0);
    lo = std::min(lo, diag[i] - r);
    hi = std::max(hi, diag[i] + r);
  }
  const double pad = 2.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(lo), std::abs(hi)) + abs_tol;
  lo -= pad;
  hi += pad;

  BisectionResult result;
  result.eigenvalues.assign(count, 0.0);
  result.iterations.assign(count, 0);
  const auto m = static_cast<std::ptrdiff_t>(count);
  int all_converged = 1;

  auto solve_index = [&](std::size_t k) {
    double a = lo, b = hi;
    int it = 0;
    bool done = false;
    while (it < max_iterations) {
      const double mid = 0.5 * (a + b);
      if (b - a <= abs_tol + 4.0 * std::numeric_limits<double>::epsilon() * std::abs(mid)) {
        done = true;
        break;
      }
      if (sturm_count(diag, off, mid) > k)
        b = mid;
      else
        a = mid;
      ++it;
    }
    result.eigenvalues[k] = 0.5 * (a + b);
    result.iterations[k] = it;
    return done;
  };

  if (exec == Exec::Serial) {
    for (std::ptrdiff_t k = 0; k < m; ++k)
      if (!solve_index(static_cast<std::size_t>(k))) all_converged = 0;
  } else {
#pragma omp parallel for schedule(dynamic) reduction(min : all_converged)
    for (std::ptrdiff_t k = 0; k < m; ++k)
      if (!solve_index(static_cast<std::size_t>(k))) all_converged = 0;
  }
  result.converged = all_converged == 1;
  return result;
}

}  // namespace dwell
