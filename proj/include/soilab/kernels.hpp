#pragma once

#include <cstddef>
#include <cstdint>
#include <span>

// Data-parallel inner loops. Every kernel has a portable scalar reference and,
// on x86-64, an AVX2+FMA variant; the variant is picked once at startup from
// the CPU features and the SOI_LAB_SIMD environment variable
// (scalar | avx2 | auto, default auto).
namespace soilab::kernels {

enum class Isa { Scalar, Avx2 };

const char* to_string(Isa isa);

struct KernelTable {
  Isa isa;
  // sum_i a[i] * b[i]
  double (*dot)(const double* a, const double* b, std::size_t n);
  // sum_i w[i] * f[i]^2
  double (*weighted_sum_sq)(const double* f, const double* w, std::size_t n);
  // Sturm sequence counts of a symmetric tridiagonal matrix for four shifts at once:
  // counts[j] = number of eigenvalues strictly below shifts[j]. off_sq holds the
  // squared off-diagonal (n - 1 entries). Lane arithmetic is identical across ISAs,
  // so counts agree bit-for-bit.
  void (*sturm_count4)(const double* diag, const double* off_sq, std::size_t n, double pivmin,
                       const double* shifts, std::int64_t* counts);
  // out[i] = c0 + cc * cos_tab[i] + cs * sin_tab[i]
  void (*harmonic_synth)(double c0, double cc, double cs, const double* cos_tab, const double* sin_tab,
                         double* out, std::size_t n);
};

const KernelTable& scalar_table();
/// Null when the build has no AVX2 variant or the CPU lacks AVX2/FMA.
const KernelTable* avx2_table();
/// The table chosen for this process.
const KernelTable& active();

// Span front ends over the active table.
double dot(std::span<const double> a, std::span<const double> b);
double weighted_sum_sq(std::span<const double> f, std::span<const double> w);
void harmonic_synth(double c0, double cc, double cs, std::span<const double> cos_tab,
                    std::span<const double> sin_tab, std::span<double> out);

/// Circular cross-correlation out[k] = sum_j ref[j] * sig[(j + k) mod n], built on dot().
void cross_correlate(std::span<const double> ref, std::span<const double> sig, std::span<double> out,
                     const KernelTable& table = active());

}  // namespace soilab::kernels
