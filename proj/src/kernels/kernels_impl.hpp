#pragma once

#include <cstddef>
#include <cstdint>

namespace soilab::kernels {

#define SOILAB_KERNEL_DECLS                                                                                \
  double dot(const double* a, const double* b, std::size_t n);                                            \
  double weighted_sum_sq(const double* f, const double* w, std::size_t n);                               \
  void sturm_count4(const double* diag, const double* off_sq, std::size_t n, double pivmin,              \
                    const double* shifts, std::int64_t* counts);                                          \
  void harmonic_synth(double c0, double cc, double cs, const double* cos_tab, const double* sin_tab,     \
                      double* out, std::size_t n);

namespace scalar {
SOILAB_KERNEL_DECLS
}

namespace avx2 {
SOILAB_KERNEL_DECLS
}

#undef SOILAB_KERNEL_DECLS

}  // namespace soilab::kernels
