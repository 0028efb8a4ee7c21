#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "soilab/kernels.hpp"

using namespace soilab::kernels;

// Every SIMD variant is checked against the scalar reference on the same inputs.

namespace {

std::vector<double> random_vec(std::size_t n, unsigned seed, double lo = -1.0, double hi = 1.0) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> d(lo, hi);
  std::vector<double> v(n);
  for (auto& x : v) x = d(rng);
  return v;
}

std::vector<const KernelTable*> tables() {
  std::vector<const KernelTable*> t{&scalar_table()};
  if (avx2_table()) t.push_back(avx2_table());
  return t;
}

}  // namespace

TEST_CASE("dot and weighted_sum_sq agree with the scalar reference") {
  for (std::size_t n : {0u, 1u, 3u, 4u, 7u, 16u, 17u, 1023u, 4096u}) {
    const auto a = random_vec(n, 1 + n);
    const auto b = random_vec(n, 7 + n);
    const auto w = random_vec(n, 11 + n, 0.0, 2.0);
    double ref_dot = 0, ref_w = 0;
    for (std::size_t i = 0; i < n; ++i) {
      ref_dot += a[i] * b[i];
      ref_w += w[i] * a[i] * a[i];
    }
    for (const auto* t : tables()) {
      CAPTURE(to_string(t->isa));
      CAPTURE(n);
      CHECK(t->dot(a.data(), b.data(), n) == doctest::Approx(ref_dot).epsilon(1e-13).scale(1.0));
      CHECK(t->weighted_sum_sq(a.data(), w.data(), n) == doctest::Approx(ref_w).epsilon(1e-13).scale(1.0));
    }
  }
}

TEST_CASE("sturm counts are bit-identical across variants") {
  const std::size_t n = 777;
  const auto d = random_vec(n, 3, -5.0, 5.0);
  auto e = random_vec(n - 1, 4);
  for (auto& x : e) x *= x;
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> s(-8.0, 8.0);
  for (int trial = 0; trial < 200; ++trial) {
    double shifts[4] = {s(rng), s(rng), s(rng), d[trial]};
    std::int64_t ref[4];
    scalar_table().sturm_count4(d.data(), e.data(), n, 1e-300, shifts, ref);
    for (int j = 0; j < 3; ++j) CHECK(ref[j] >= 0);
    for (const auto* t : tables()) {
      std::int64_t got[4];
      t->sturm_count4(d.data(), e.data(), n, 1e-300, shifts, got);
      for (int j = 0; j < 4; ++j) CHECK(got[j] == ref[j]);
    }
  }
}

TEST_CASE("sturm count of a diagonal matrix") {
  const std::vector<double> d{1.0, 2.0, 3.0, 4.0, 5.0};
  const std::vector<double> e(4, 0.0);
  const double shifts[4] = {0.5, 2.5, 4.999, 10.0};
  for (const auto* t : tables()) {
    std::int64_t c[4];
    t->sturm_count4(d.data(), e.data(), d.size(), 1e-300, shifts, c);
    CHECK(c[0] == 0);
    CHECK(c[1] == 2);
    CHECK(c[2] == 4);
    CHECK(c[3] == 5);
  }
}

TEST_CASE("harmonic_synth") {
  const std::size_t n = 1031;
  const auto c = random_vec(n, 8);
  const auto s = random_vec(n, 9);
  std::vector<double> ref(n), got(n);
  scalar_table().harmonic_synth(0.3, -1.2, 0.7, c.data(), s.data(), ref.data(), n);
  for (std::size_t i = 0; i < n; ++i) CHECK(ref[i] == doctest::Approx(0.3 - 1.2 * c[i] + 0.7 * s[i]).epsilon(1e-15));
  for (const auto* t : tables()) {
    t->harmonic_synth(0.3, -1.2, 0.7, c.data(), s.data(), got.data(), n);
    for (std::size_t i = 0; i < n; ++i) CHECK(got[i] == doctest::Approx(ref[i]).epsilon(1e-14));
  }
}

TEST_CASE("cross correlation peaks at the applied shift") {
  const std::size_t n = 256;
  std::vector<double> ref(n), sig(n), out(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double phi = 2 * M_PI * static_cast<double>(j) / n;
    ref[j] = std::exp(-10 * (1 - std::cos(phi)));
    sig[(j + 37) % n] = ref[j];
  }
  for (const auto* t : tables()) {
    cross_correlate(ref, sig, out, *t);
    std::size_t best = 0;
    for (std::size_t k = 1; k < n; ++k)
      if (out[k] > out[best]) best = k;
    CHECK(best == 37);
  }
}

TEST_CASE("active table honours the environment override") {
  const auto& t = active();
  if (t.isa == Isa::Avx2) CHECK(avx2_table() != nullptr);
  CHECK(std::string(to_string(Isa::Scalar)) == "scalar");
}
