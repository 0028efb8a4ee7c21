#include <cmath>

#include "kernels_impl.hpp"

namespace soilab::kernels::scalar {

double dot(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

double weighted_sum_sq(const double* f, const double* w, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += w[i] * (f[i] * f[i]);
  return acc;
}

void sturm_count4(const double* diag, const double* off_sq, std::size_t n, double pivmin, const double* shifts,
                  std::int64_t* counts) {
  for (int lane = 0; lane < 4; ++lane) {
    const double x = shifts[lane];
    std::int64_t count = 0;
    double q = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      q = i == 0 ? diag[0] - x : (diag[i] - x) - off_sq[i - 1] / q;
      if (std::abs(q) < pivmin) q = -pivmin;
      count += q < 0.0 ? 1 : 0;
    }
    counts[lane] = count;
  }
}

void harmonic_synth(double c0, double cc, double cs, const double* cos_tab, const double* sin_tab, double* out,
                    std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = c0 + cc * cos_tab[i] + cs * sin_tab[i];
}

}  // namespace soilab::kernels::scalar
