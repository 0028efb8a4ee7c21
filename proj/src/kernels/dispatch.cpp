#include <cstdlib>
#include <stdexcept>
#include <string>

#include "kernels_impl.hpp"
#include "soilab/error.hpp"
#include "soilab/kernels.hpp"

namespace soilab::kernels {

const char* to_string(Isa isa) { return isa == Isa::Avx2 ? "avx2" : "scalar"; }

const KernelTable& scalar_table() {
  static const KernelTable table{Isa::Scalar, &scalar::dot, &scalar::weighted_sum_sq, &scalar::sturm_count4,
                                 &scalar::harmonic_synth};
  return table;
}

const KernelTable* avx2_table() {
#if defined(SOILAB_HAVE_AVX2)
  static const bool supported = [] {
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  }();
  static const KernelTable table{Isa::Avx2, &avx2::dot, &avx2::weighted_sum_sq, &avx2::sturm_count4,
                                 &avx2::harmonic_synth};
  return supported ? &table : nullptr;
#else
  return nullptr;
#endif
}

namespace {

const KernelTable& select() {
  const char* env = std::getenv("SOI_LAB_SIMD");
  const std::string choice = env ? env : "auto";
  if (choice == "scalar") return scalar_table();
  const KernelTable* fast = avx2_table();
  if (choice == "avx2" && !fast) throw Error(ErrorCode::InvalidArgument, "SOI_LAB_SIMD=avx2 but AVX2 is unavailable");
  if (choice != "auto" && choice != "avx2") {
    throw Error(ErrorCode::InvalidArgument, "SOI_LAB_SIMD must be scalar, avx2 or auto");
  }
  return fast ? *fast : scalar_table();
}

void check_sizes(std::size_t a, std::size_t b) {
  if (a != b) throw Error(ErrorCode::InvalidArgument, "kernel operands differ in length");
}

}  // namespace

const KernelTable& active() {
  static const KernelTable& table = select();
  return table;
}

double dot(std::span<const double> a, std::span<const double> b) {
  check_sizes(a.size(), b.size());
  return active().dot(a.data(), b.data(), a.size());
}

double weighted_sum_sq(std::span<const double> f, std::span<const double> w) {
  check_sizes(f.size(), w.size());
  return active().weighted_sum_sq(f.data(), w.data(), f.size());
}

void harmonic_synth(double c0, double cc, double cs, std::span<const double> cos_tab,
                    std::span<const double> sin_tab, std::span<double> out) {
  check_sizes(cos_tab.size(), sin_tab.size());
  check_sizes(cos_tab.size(), out.size());
  active().harmonic_synth(c0, cc, cs, cos_tab.data(), sin_tab.data(), out.data(), out.size());
}

void cross_correlate(std::span<const double> ref, std::span<const double> sig, std::span<double> out,
                     const KernelTable& table) {
  check_sizes(ref.size(), sig.size());
  check_sizes(ref.size(), out.size());
  const std::size_t n = ref.size();
  for (std::size_t k = 0; k < n; ++k) {
    // j in [0, n-k) pairs with sig[k..n), j in [n-k, n) wraps to sig[0..k).
    out[k] = table.dot(ref.data(), sig.data() + k, n - k) + table.dot(ref.data() + (n - k), sig.data(), k);
  }
}

}  // namespace soilab::kernels
