#include <doctest.h>

#include <cmath>
#include <initializer_list>

#include "soilab/bessel.hpp"
#include "soilab/error.hpp"

// std::cyl_bessel_j / std::cyl_bessel_k (libstdc++ special functions) serve as the
// independent reference for the recurrence-based implementation.

namespace bessel = soilab::bessel;

TEST_CASE("J_n matches the standard library over orders and arguments") {
  const double xs[] = {1e-6, 0.01, 0.5, 1.0, 2.404825557695773, 5.0, 12.3, 40.0, 79.9, 100.0};
  for (int n = 0; n <= 90; n += 1) {
    for (double x : xs) {
      const double ref = std::cyl_bessel_j(static_cast<double>(n), x);
      CHECK(bessel::j(n, x) == doctest::Approx(ref).epsilon(1e-10).scale(1e-2));
      CHECK(std::abs(bessel::j(n, x) - ref) < 1e-12);
    }
  }
}

TEST_CASE("J_n symmetries and special values") {
  CHECK(bessel::j(0, 0.0) == 1.0);
  CHECK(bessel::j(3, 0.0) == 0.0);
  CHECK(bessel::j(-3, 2.0) == doctest::Approx(-bessel::j(3, 2.0)));
  CHECK(bessel::j(-4, 2.0) == doctest::Approx(bessel::j(4, 2.0)));
  CHECK(std::abs(bessel::j(0, 2.404825557695773)) < 1e-14);
  const auto p = bessel::j_pair(0, 1.7);
  CHECK(p.j_prev == doctest::Approx(-bessel::j(1, 1.7)));
  CHECK(p.j == doctest::Approx(bessel::j(0, 1.7)));
}

TEST_CASE("J_n derivative agrees with a centred difference") {
  for (int n : {0, 1, 2, 7, 30}) {
    for (double x : {0.3, 3.0, 25.0}) {
      const double h = 1e-5;
      const double fd = (bessel::j(n, x + h) - bessel::j(n, x - h)) / (2 * h);
      CHECK(bessel::j_prime(n, x) == doctest::Approx(fd).epsilon(1e-7).scale(1e-3));
    }
  }
}

TEST_CASE("K_n matches the standard library (relative)") {
  const double xs[] = {1e-3, 0.1, 0.9, 2.0, 2.0000001, 3.5, 10.0, 50.0, 300.0};
  for (int n = 0; n <= 60; ++n) {
    for (double x : xs) {
      const double ref = std::cyl_bessel_k(static_cast<double>(n), x);
      if (!std::isfinite(ref) || ref == 0.0 || ref > 1e300 || ref < 1e-300) continue;
      CHECK(bessel::k(n, x) == doctest::Approx(ref).epsilon(1e-12));
    }
  }
}

TEST_CASE("K ratios and logs stay finite where K itself overflows") {
  // K_80(0.01) ~ 1e300+ : the ratio and log must still be usable.
  const double lr = bessel::log_k(80, 0.01);
  CHECK(std::isfinite(lr));
  CHECK(lr > 690.0);
  // Small-argument limit K_{m-1}/K_m -> x / (2 (m-1)).
  CHECK(bessel::k_ratio(80, 1e-4) == doctest::Approx(1e-4 / (2.0 * 79)).epsilon(1e-6));
  CHECK(bessel::k_ratio(0, 1.3) == doctest::Approx(std::cyl_bessel_k(1.0, 1.3) / std::cyl_bessel_k(0.0, 1.3)).epsilon(1e-13));
  CHECK(bessel::k_scaled(0, 700.0) == doctest::Approx(std::sqrt(M_PI / 1400.0) * (1 - 1.0 / 5600.0)).epsilon(1e-7));
}

TEST_CASE("K_n derivative") {
  for (int n : {0, 1, 5}) {
    for (double x : {0.4, 2.5, 9.0}) {
      const double h = 1e-5;
      const double fd = (bessel::k(n, x + h) - bessel::k(n, x - h)) / (2 * h);
      CHECK(bessel::k_prime(n, x) == doctest::Approx(fd).epsilon(1e-7));
    }
  }
}

TEST_CASE("non-positive K argument is rejected") {
  CHECK_THROWS_AS(bessel::k(1, 0.0), soilab::Error);
  CHECK_THROWS_AS(bessel::k_ratio(1, -1.0), soilab::Error);
}
