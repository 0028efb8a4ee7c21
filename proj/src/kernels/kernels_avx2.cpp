// Compiled with -mavx2 -mfma; only reached after a runtime CPU check.
#include <immintrin.h>

#include <cmath>

#include "kernels_impl.hpp"

namespace soilab::kernels::avx2 {

namespace {

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

}  // namespace

double dot(const double* a, const double* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  __m256d acc2 = _mm256_setzero_pd();
  __m256d acc3 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 16 <= n; i += 16) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), acc1);
    acc2 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 8), _mm256_loadu_pd(b + i + 8), acc2);
    acc3 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 12), _mm256_loadu_pd(b + i + 12), acc3);
  }
  for (; i + 4 <= n; i += 4) acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
  double acc = hsum(_mm256_add_pd(_mm256_add_pd(acc0, acc1), _mm256_add_pd(acc2, acc3)));
  for (; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

double weighted_sum_sq(const double* f, const double* w, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const __m256d f0 = _mm256_loadu_pd(f + i);
    const __m256d f1 = _mm256_loadu_pd(f + i + 4);
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(w + i), _mm256_mul_pd(f0, f0), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(w + i + 4), _mm256_mul_pd(f1, f1), acc1);
  }
  for (; i + 4 <= n; i += 4) {
    const __m256d f0 = _mm256_loadu_pd(f + i);
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(w + i), _mm256_mul_pd(f0, f0), acc0);
  }
  double acc = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) acc += w[i] * (f[i] * f[i]);
  return acc;
}

void sturm_count4(const double* diag, const double* off_sq, std::size_t n, double pivmin, const double* shifts,
                  std::int64_t* counts) {
  if (n == 0) {
    for (int lane = 0; lane < 4; ++lane) counts[lane] = 0;
    return;
  }
  const __m256d x = _mm256_loadu_pd(shifts);
  const __m256d piv = _mm256_set1_pd(pivmin);
  const __m256d neg_piv = _mm256_set1_pd(-pivmin);
  const __m256d sign_mask = _mm256_set1_pd(-0.0);
  const __m256d zero = _mm256_setzero_pd();
  const __m256d one = _mm256_set1_pd(1.0);

  auto fix_and_count = [&](__m256d q, __m256d& count) {
    const __m256d abs_q = _mm256_andnot_pd(sign_mask, q);
    q = _mm256_blendv_pd(q, neg_piv, _mm256_cmp_pd(abs_q, piv, _CMP_LT_OQ));
    count = _mm256_add_pd(count, _mm256_and_pd(_mm256_cmp_pd(q, zero, _CMP_LT_OQ), one));
    return q;
  };

  __m256d count = _mm256_setzero_pd();
  __m256d q = _mm256_sub_pd(_mm256_set1_pd(diag[0]), x);
  q = fix_and_count(q, count);
  for (std::size_t i = 1; i < n; ++i) {
    const __m256d d = _mm256_sub_pd(_mm256_set1_pd(diag[i]), x);
    q = _mm256_sub_pd(d, _mm256_div_pd(_mm256_set1_pd(off_sq[i - 1]), q));
    q = fix_and_count(q, count);
  }
  alignas(32) double out[4];
  _mm256_store_pd(out, count);
  for (int lane = 0; lane < 4; ++lane) counts[lane] = static_cast<std::int64_t>(out[lane]);
}

void harmonic_synth(double c0, double cc, double cs, const double* cos_tab, const double* sin_tab, double* out,
                    std::size_t n) {
  const __m256d v0 = _mm256_set1_pd(c0);
  const __m256d vc = _mm256_set1_pd(cc);
  const __m256d vs = _mm256_set1_pd(cs);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d t = _mm256_fmadd_pd(vc, _mm256_loadu_pd(cos_tab + i), v0);
    _mm256_storeu_pd(out + i, _mm256_fmadd_pd(vs, _mm256_loadu_pd(sin_tab + i), t));
  }
  for (; i < n; ++i) out[i] = c0 + cc * cos_tab[i] + cs * sin_tab[i];
}

}  // namespace soilab::kernels::avx2
