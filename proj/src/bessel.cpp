#include "soilab/bessel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "soilab/error.hpp"

namespace soilab::bessel {

namespace {

constexpr double kEulerGamma = 0.57721566490153286061;

void require_positive(double x) {
  if (!(x > 0.0) || !std::isfinite(x)) throw Error(ErrorCode::InvalidArgument, "Bessel argument must be positive");
}

// Miller's algorithm: returns J_{n-1}(x) and J_n(x) for n >= 1, and J_0, J_1 packed as
// {J_1, J_0} is not needed; callers handle n = 0 separately.
struct MillerResult {
  double j_nm1;
  double j_n;
  double j_np1;
};

MillerResult miller(int n, double x) {
  const int top = std::max(n + 1, static_cast<int>(x));
  int start = top + 30 + static_cast<int>(std::sqrt(60.0 * top));
  start += start % 2;  // even so the normalisation sum lines up

  double j_above = 0.0;
  double j_here = 1e-300;
  double norm = 0.0;
  MillerResult r{0.0, 0.0, 0.0};
  for (int k = start; k > 0; --k) {
    const double j_below = (2.0 * k / x) * j_here - j_above;
    j_above = j_here;
    j_here = j_below;  // now J_{k-1}
    const int order = k - 1;
    if (order == n + 1) r.j_np1 = j_here;
    if (order == n) r.j_n = j_here;
    if (order == n - 1) r.j_nm1 = j_here;
    if (order % 2 == 0) norm += (order == 0 ? 1.0 : 2.0) * j_here;
    if (std::abs(j_here) > 1e250) {
      j_here *= 1e-250;
      j_above *= 1e-250;
      norm *= 1e-250;
      r.j_nm1 *= 1e-250;
      r.j_n *= 1e-250;
      r.j_np1 *= 1e-250;
    }
  }
  r.j_nm1 /= norm;
  r.j_n /= norm;
  r.j_np1 /= norm;
  return r;
}

// Ascending-series K_0 and K_1 for 0 < x <= 2 (A&S 9.6.13 and 9.6.11).
void k01_series(double x, double& k0, double& k1) {
  const double y = 0.25 * x * x;
  const double log_half = std::log(0.5 * x);
  double term = 1.0;  // y^k / (k!)^2
  double harmonic = 0.0;
  double i0 = 0.0, s0 = 0.0;
  for (int k = 0; k < 60; ++k) {
    if (k > 0) {
      term *= y / (static_cast<double>(k) * k);
      harmonic += 1.0 / k;
    }
    i0 += term;
    s0 += term * harmonic;
    if (term < 1e-18 * i0) break;
  }
  k0 = -(log_half + kEulerGamma) * i0 + s0;

  // K_1 = 1/x + ln(x/2) I_1 - (x/4) sum_k [psi(k+1) + psi(k+2)] y^k / (k! (k+1)!)
  double t = 1.0;  // y^k / (k! (k+1)!)
  double hk = 0.0;  // H_k
  double i1 = 0.0, s1 = 0.0;
  for (int k = 0; k < 60; ++k) {
    if (k > 0) {
      t *= y / (static_cast<double>(k) * (k + 1));
      hk += 1.0 / k;
    }
    const double psi_sum = 2.0 * (-kEulerGamma) + hk + (hk + 1.0 / (k + 1));
    i1 += t;
    s1 += t * psi_sum;
    if (t < 1e-18 * i1) break;
  }
  i1 *= 0.5 * x;
  k1 = 1.0 / x + log_half * i1 - 0.25 * x * s1;
}

// exp(x) K_nu(x) = int_0^inf exp(-x (cosh t - 1)) cosh(nu t) dt by the trapezoidal rule,
// which converges geometrically for this entire, doubly-exponentially decaying integrand.
double k_scaled_trapezoid(double nu, double x) {
  const double h = std::min(0.05, 0.5 / std::sqrt(x));
  double sum = 0.5;  // t = 0 term
  for (int i = 1; i < 4000; ++i) {
    const double t = i * h;
    const double term = std::exp(-x * (std::cosh(t) - 1.0)) * std::cosh(nu * t);
    sum += term;
    if (term < 1e-18 * sum) break;
  }
  return h * sum;
}

// Scaled K_0 and K_1: exp(x) K_{0,1}(x).
void k01_scaled(double x, double& k0, double& k1) {
  if (x <= 2.0) {
    k01_series(x, k0, k1);
    const double e = std::exp(x);
    k0 *= e;
    k1 *= e;
  } else {
    k0 = k_scaled_trapezoid(0.0, x);
    k1 = k_scaled_trapezoid(1.0, x);
  }
}

}  // namespace

double j(int n, double x) {
  if (n < 0) return (n % 2 == 0 ? 1.0 : -1.0) * j(-n, x);
  if (x == 0.0) return n == 0 ? 1.0 : 0.0;
  if (x < 0.0) return (n % 2 == 0 ? 1.0 : -1.0) * j(n, -x);
  if (n == 0) return miller(1, x).j_nm1;
  return miller(n, x).j_n;
}

JPair j_pair(int n, double x) {
  if (n < 0) throw Error(ErrorCode::InvalidArgument, "j_pair expects n >= 0");
  if (x == 0.0) return {n == 1 ? 1.0 : 0.0, n == 0 ? 1.0 : 0.0};
  if (n == 0) {
    const auto r = miller(1, x);
    return {-r.j_n, r.j_nm1};
  }
  const auto r = miller(n, x);
  return {r.j_nm1, r.j_n};
}

double j_prime(int n, double x) {
  if (n == 0) return -j(1, x);
  const auto p = j_pair(n, x);
  return p.j_prev - (n / x) * p.j;
}

double k_ratio(int n, double x) {
  require_positive(x);
  if (n < 0) n = -n;
  double k0 = 0.0, k1 = 0.0;
  k01_scaled(x, k0, k1);
  double q = k1 / k0;  // K_1 / K_0
  if (n == 0) return q;
  // q_i = K_{i+1}/K_i = 1/q_{i-1} + 2i/x
  for (int i = 1; i < n; ++i) q = 1.0 / q + 2.0 * i / x;
  return 1.0 / q;
}

double log_k(int n, double x) {
  require_positive(x);
  if (n < 0) n = -n;
  double k0 = 0.0, k1 = 0.0;
  k01_scaled(x, k0, k1);
  double log_val = std::log(k0) - x;
  double q = k1 / k0;
  for (int i = 0; i < n; ++i) {
    if (i > 0) q = 1.0 / q + 2.0 * i / x;
    log_val += std::log(q);
  }
  return log_val;
}

double k_scaled(int n, double x) { return std::exp(log_k(n, x) + x); }

double k(int n, double x) { return std::exp(log_k(n, x)); }

double k_prime(int n, double x) {
  if (n < 0) n = -n;
  const double kn = k(n, x);
  return -kn * k_ratio(n, x) - (n / x) * kn;
}

}  // namespace soilab::bessel
