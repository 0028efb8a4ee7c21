#include "soilab/tridiagonal.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "soilab/error.hpp"

namespace soilab {

namespace {

struct Prepared {
  std::vector<double> off_sq;
  double pivmin;
  double lower;  // Gershgorin bounds
  double upper;
};

Prepared prepare(const SymTridiagonal& t) {
  const std::size_t n = t.size();
  Prepared p;
  p.off_sq.resize(n > 0 ? n - 1 : 0);
  double max_off_sq = 0.0;
  p.lower = std::numeric_limits<double>::infinity();
  p.upper = -p.lower;
  for (std::size_t i = 0; i < n; ++i) {
    const double left = i > 0 ? std::abs(t.off[i - 1]) : 0.0;
    const double right = i + 1 < n ? std::abs(t.off[i]) : 0.0;
    p.lower = std::min(p.lower, t.diag[i] - left - right);
    p.upper = std::max(p.upper, t.diag[i] + left + right);
    if (i + 1 < n) {
      p.off_sq[i] = t.off[i] * t.off[i];
      max_off_sq = std::max(max_off_sq, p.off_sq[i]);
    }
  }
  p.pivmin = std::numeric_limits<double>::min() * std::max(1.0, max_off_sq);
  return p;
}

}  // namespace

std::int64_t count_below(const SymTridiagonal& t, double x, const kernels::KernelTable& table) {
  const Prepared p = prepare(t);
  const std::array<double, 4> shifts{x, x, x, x};
  std::array<std::int64_t, 4> counts{};
  table.sturm_count4(t.diag.data(), p.off_sq.data(), t.size(), p.pivmin, shifts.data(), counts.data());
  return counts[0];
}

std::vector<double> eigenvalues_below(const SymTridiagonal& t, double upper, const kernels::KernelTable& table) {
  const std::size_t n = t.size();
  if (n == 0) return {};
  const Prepared p = prepare(t);
  auto counts4 = [&](const std::array<double, 4>& shifts) {
    std::array<std::int64_t, 4> c{};
    table.sturm_count4(t.diag.data(), p.off_sq.data(), n, p.pivmin, shifts.data(), c.data());
    return c;
  };

  const double hi_bound = std::min(upper, p.upper + 1.0);
  const std::int64_t k = counts4({hi_bound, hi_bound, hi_bound, hi_bound})[0];
  const double span = std::max(std::abs(p.lower), std::abs(p.upper));
  const double lo_bound = p.lower - 1e-12 * span - 1.0;

  std::vector<double> values;
  values.reserve(static_cast<std::size_t>(k));
  for (std::int64_t j = 0; j < k; ++j) {
    // Bracket the (j+1)-th eigenvalue: count(lo) <= j < count(hi).
    double lo = values.empty() ? lo_bound : values.back() - 1e-9 * (std::abs(values.back()) + 1.0);
    lo = std::max(lo, lo_bound);
    double hi = hi_bound;
    for (int sweep = 0; sweep < 200; ++sweep) {
      const double tol = 2.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(lo), std::abs(hi)) +
                         p.pivmin;
      if (hi - lo <= tol) break;
      const double step = (hi - lo) / 5.0;
      const std::array<double, 4> shifts{lo + step, lo + 2 * step, lo + 3 * step, lo + 4 * step};
      const auto c = counts4(shifts);
      double new_lo = lo;
      double new_hi = hi;
      for (int s = 0; s < 4; ++s) {
        if (c[s] <= j) new_lo = shifts[s];
      }
      for (int s = 3; s >= 0; --s) {
        if (c[s] > j) new_hi = shifts[s];
      }
      if (new_lo == lo && new_hi == hi) break;
      lo = new_lo;
      hi = new_hi;
    }
    values.push_back(0.5 * (lo + hi));
  }
  return values;
}

std::vector<double> eigenvector(const SymTridiagonal& t, double lambda) {
  const std::size_t n = t.size();
  if (n == 0) return {};
  if (n == 1) return {1.0};

  double scale = 0.0;
  for (std::size_t i = 0; i < n; ++i) scale = std::max(scale, std::abs(t.diag[i]));
  for (double o : t.off) scale = std::max(scale, std::abs(o));
  const double tiny = std::max(scale, 1.0) * std::numeric_limits<double>::epsilon();
  // Nudge the shift off the eigenvalue so the factorisation is not exactly singular.
  const double shift = lambda + tiny * 4.0;

  // LU with partial pivoting of T - shift I (LAPACK dgttrf layout).
  std::vector<double> dl(t.off), d(n), du(t.off), du2(n > 2 ? n - 2 : 0, 0.0);
  std::vector<char> swapped(n - 1, 0);
  for (std::size_t i = 0; i < n; ++i) d[i] = t.diag[i] - shift;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (std::abs(d[i]) >= std::abs(dl[i])) {
      if (d[i] == 0.0) d[i] = tiny;
      const double fact = dl[i] / d[i];
      dl[i] = fact;
      d[i + 1] -= fact * du[i];
    } else {
      const double fact = d[i] / dl[i];
      d[i] = dl[i];
      dl[i] = fact;
      const double temp = du[i];
      du[i] = d[i + 1];
      d[i + 1] = temp - fact * d[i + 1];
      if (i + 2 < n) {
        du2[i] = du[i + 1];
        du[i + 1] = -fact * du[i + 1];
      }
      swapped[i] = 1;
    }
  }
  if (d[n - 1] == 0.0) d[n - 1] = tiny;

  auto solve = [&](std::vector<double>& b) {
    for (std::size_t i = 0; i + 1 < n; ++i) {
      if (!swapped[i]) {
        b[i + 1] -= dl[i] * b[i];
      } else {
        const double temp = b[i];
        b[i] = b[i + 1];
        b[i + 1] = temp - dl[i] * b[i];
      }
    }
    b[n - 1] /= d[n - 1];
    b[n - 2] = (b[n - 2] - du[n - 2] * b[n - 1]) / d[n - 2];
    for (std::size_t ii = n - 2; ii-- > 0;) {
      b[ii] = (b[ii] - du[ii] * b[ii + 1] - du2[ii] * b[ii + 2]) / d[ii];
    }
  };
  auto normalise = [](std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    s = std::sqrt(s);
    for (double& x : v) x /= s;
  };

  std::vector<double> v(n, 1.0);
  for (std::size_t i = 0; i < n; ++i) v[i] = 1.0 + 0.01 * std::sin(0.37 * static_cast<double>(i));
  normalise(v);
  for (int iter = 0; iter < 4; ++iter) {
    solve(v);
    normalise(v);
  }

  // Residual ||T v - lambda v||.
  double res = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double tv = t.diag[i] * v[i];
    if (i > 0) tv += t.off[i - 1] * v[i - 1];
    if (i + 1 < n) tv += t.off[i] * v[i + 1];
    res += (tv - lambda * v[i]) * (tv - lambda * v[i]);
  }
  if (!(std::sqrt(res) <= 1e-8 * std::max(scale, 1.0))) {
    throw Error(ErrorCode::NumericalFailure, "inverse iteration did not converge");
  }

  double vmax = 0.0;
  for (double x : v) vmax = std::max(vmax, std::abs(x));
  for (double x : v) {
    if (std::abs(x) > 1e-8 * vmax) {
      if (x < 0.0) {
        for (double& y : v) y = -y;
      }
      break;
    }
  }
  return v;
}

}  // namespace soilab
