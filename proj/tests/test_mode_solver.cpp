#include <doctest.h>

#include <cmath>
#include <initializer_list>
#include <numbers>

#include "soilab/bessel.hpp"
#include "soilab/mode_solver.hpp"

using namespace soilab;

// Reference values frozen from tests/oracles/step_dispersion_oracle.py (scipy brentq on
// the textbook J/K matching condition, quad for the normalisation).

namespace {

WaveguideSpec step_spec(double v, double delta = 0.01) {
  return WaveguideSpec::from_v(ParticleKind::photon(), v, delta);
}

}  // namespace

TEST_CASE("single-mode guide: V = 2 carries only m = 0") {
  const auto spec = step_spec(2.0);
  CHECK(solve_modes(spec, 1, 4).empty());
  CHECK(solve_modes(spec, 0, 4).size() == 1);
  CHECK_THROWS_AS(solve_mode(spec, 1), Error);
  CHECK(max_guided_m(spec) == 0);
}

TEST_CASE("m = 1 cutoff sits at the first zero of J_0") {
  const double vc = 2.4048255576957724;
  CHECK(solve_modes(step_spec(vc * (1 - 1e-6)), 1, 1).empty());
  CHECK(solve_modes(step_spec(vc * (1 + 1e-4)), 1, 1).size() == 1);
}

TEST_CASE("V = 5 roots and propagation constants") {
  const auto spec = WaveguideSpec{ParticleKind::photon(), 1.0, 0.01, RadialProfile::step(), 50.0};
  const auto m0 = solve_modes(spec, 0, 5);
  REQUIRE(m0.size() == 2);
  CHECK(m0[0].kappa_a() == doctest::Approx(1.9940613530719584).epsilon(1e-11));
  CHECK(m0[1].kappa_a() == doctest::Approx(4.428809322051068).epsilon(1e-11));
  CHECK(m0[0].beta0 == doctest::Approx(49.96022136980765).epsilon(1e-13));
  CHECK(m0[1].beta0 == doctest::Approx(49.80347024042515).epsilon(1e-13));
  CHECK(m0[0].p == 1);
  CHECK(m0[1].p == 2);

  const auto m1 = solve_mode(spec, 1);
  CHECK(m1.kappa_a() == doctest::Approx(3.1527253670515947).epsilon(1e-11));
  CHECK(m1.norm_N == doctest::Approx(1.1339512429619714).epsilon(1e-10));
  const double bracket = std::numbers::pi * m1.norm_N * m1.norm_N * std::pow(bessel::j(1, m1.kappa_a()), 2);
  CHECK(bracket == doctest::Approx(0.3171840130209544).epsilon(1e-10));

  CHECK(solve_mode(spec, 2).kappa_a() == doctest::Approx(4.178848356143426).epsilon(1e-11));
  CHECK(solve_modes(spec, 3, 3).empty());
}

TEST_CASE("V = 8 roots") {
  const auto spec = step_spec(8.0);
  CHECK(solve_mode(spec, 1).kappa_a() == doctest::Approx(3.3943055700474574).epsilon(1e-11));
  CHECK(solve_mode(spec, 2).kappa_a() == doctest::Approx(4.538323780673288).epsilon(1e-11));
  CHECK(solve_mode(spec, 3).kappa_a() == doctest::Approx(5.621494383842379).epsilon(1e-11));
}

TEST_CASE("max guided m over a range of V") {
  const std::pair<double, int> table[] = {{2.0, 0}, {2.41, 1}, {10.0, 7}, {20.0, 16},
                                          {40.0, 34}, {50.0, 44}, {80.0, 73}};
  for (auto [v, expect] : table) {
    CAPTURE(v);
    CHECK(max_guided_m(step_spec(v)) == expect);
  }
}

TEST_CASE("dispersion function is pole free and has the w -> 0 limit") {
  for (int m : {0, 1, 4}) {
    const double v = 7.0;
    CHECK(step_dispersion(m, v, v) == doctest::Approx(v * bessel::j(m - 1, v)).epsilon(1e-12));
    CHECK(std::isfinite(step_dispersion(m, v, v * (1 - 1e-14))));
    for (double u = 0.01; u < v; u += 0.013) CHECK(std::isfinite(step_dispersion(m, v, u)));
  }
}

TEST_CASE("analytic normalisation integrates to one") {
  for (double v : {2.2, 5.0, 12.0, 40.0}) {
    const auto spec = step_spec(v);
    for (int m = 0; m <= max_guided_m(spec); m += std::max(1, max_guided_m(spec) / 4)) {
      for (const auto& mode : solve_modes(spec, m, 3)) {
        CAPTURE(v);
        CAPTURE(m);
        CHECK(normalization_integral(mode) == doctest::Approx(1.0).epsilon(1e-8));
      }
    }
  }
}

TEST_CASE("psi is continuous with continuous slope at the interface") {
  const auto mode = solve_mode(step_spec(8.0), 2);
  const double e = 1e-7;
  CHECK(mode.psi(1.0 - e) == doctest::Approx(mode.psi(1.0 + e)).epsilon(1e-6));
  const double d_in = (mode.psi(1.0 - e) - mode.psi(1.0 - 3 * e)) / (2 * e);
  const double d_out = (mode.psi(1.0 + 3 * e) - mode.psi(1.0 + e)) / (2 * e);
  CHECK(d_in == doctest::Approx(d_out).epsilon(1e-4));
}

TEST_CASE("smoothed step approaches the step closed form") {
  auto smooth = step_spec(5.0);
  smooth.profile = RadialProfile::smoothed_step(1e-3);
  const auto g = solve_mode(smooth, 1);
  CHECK(g.source == ModeSource::RadialGrid);
  CHECK(g.kappa_a() == doctest::Approx(3.1527253670515947).epsilon(1e-4));
  CHECK(normalization_integral(g) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("photon group velocity") {
  const auto spec = WaveguideSpec{ParticleKind::photon(), 1.0, 0.01, RadialProfile::step(), 50.0};
  const auto mode = solve_mode(spec, 0);
  CHECK(group_velocity(spec, mode) == doctest::Approx(0.9994900365051578).epsilon(1e-8));
}

TEST_CASE("electron group velocity equals beta0 (hbar = m = 1)") {
  const auto spec = WaveguideSpec{ParticleKind::electron(), 1.0, 0.01, RadialProfile::step(), 50.0};
  for (int m : {0, 2}) {
    const auto mode = solve_mode(spec, m);
    CHECK(group_velocity(spec, mode) == doctest::Approx(mode.beta0).epsilon(1e-8));
  }
}

TEST_CASE("rescale_frequency follows each dispersion law") {
  const auto ph = WaveguideSpec{ParticleKind::photon(), 1.0, 0.01, RadialProfile::step(), 50.0};
  const auto ph2 = rescale_frequency(ph, 2.0);
  CHECK(ph2.k_core == doctest::Approx(100.0));
  CHECK(ph2.delta == doctest::Approx(0.01));
  auto el = ph;
  el.particle = ParticleKind::electron();
  const auto el2 = rescale_frequency(el, 2.0);
  CHECK(el2.k_core * el2.k_core * el2.delta == doctest::Approx(50.0 * 50.0 * 0.01));
}
