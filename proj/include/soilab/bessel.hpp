#pragma once

/// Integer-order Bessel functions J_n and K_n for real x > 0.
///
/// J_n uses Miller's downward recurrence normalised by J_0 + 2 sum J_2k = 1.
/// K_0 and K_1 come from their ascending series for x <= 2 and from the
/// trapezoidal rule on exp(-x cosh t) cosh(nu t) otherwise; higher orders use
/// the (stable) upward recurrence, carried as ratios so that large orders at
/// small arguments never overflow. Target absolute accuracy is 1e-12.
namespace soilab::bessel {

struct JPair {
  double j_prev;  // J_{n-1}(x), with J_{-1} = -J_1
  double j;       // J_n(x)
};

double j(int n, double x);
JPair j_pair(int n, double x);
/// dJ_n/dx from the recurrence J_n' = J_{n-1} - (n/x) J_n.
double j_prime(int n, double x);

double k(int n, double x);
/// exp(x) K_n(x); finite where K_n underflows.
double k_scaled(int n, double x);
/// log K_n(x); finite where K_n overflows (large n, small x).
double log_k(int n, double x);
/// K_{n-1}(x) / K_n(x), with K_{-1} = K_1.
double k_ratio(int n, double x);
/// dK_n/dx = -K_{n-1} - (n/x) K_n.
double k_prime(int n, double x);

}  // namespace soilab::bessel
