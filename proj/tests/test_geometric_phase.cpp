#include <doctest.h>

#include <cmath>
#include <initializer_list>
#include <numbers>
#include <random>

#include "soilab/geometric_phase.hpp"

using namespace soilab;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("helix geometry") {
  HelixGeometry g{1.0, 0.1, 1};
  CHECK(g.pitch() == doctest::Approx(2 * kPi / std::tan(0.1)));
  CHECK(g.solid_angle() == doctest::Approx(kPi * 0.01).epsilon(0.01));
  CHECK(g.solid_angle() > 0.0);
  CHECK(HelixGeometry{1.0, 1.5, 1}.solid_angle() < 2 * kPi);
  CHECK_THROWS_AS(validate(HelixGeometry{1.0, 0.0, 1}), Error);
  CHECK_THROWS_AS(validate(HelixGeometry{1.0, kPi / 2, 1}), Error);
  CHECK_THROWS_AS(validate(HelixGeometry{-1.0, 0.3, 1}), Error);
}

TEST_CASE("berry phase per unit length") {
  const HelixGeometry g{2.0, 0.2, 1};
  const double b = berry_phase_per_z(g, 1, 1.0);
  CHECK(b == doctest::Approx(-g.solid_angle() / g.pitch()));
  CHECK(berry_phase_per_z(HelixGeometry{2.0, 0.2, -1}, 1, 1.0) == -b);
  CHECK(berry_phase_per_z(g, -1, 1.0) == -b);
  CHECK(berry_phase_per_z(g, 1, 1.0) / berry_phase_per_z(g, 1, 0.5) == 2.0);
  CHECK(std::abs(berry_phase_per_z(HelixGeometry{1.0, 1e-6, 1}, 1, 1.0)) < 1e-17);
}

TEST_CASE("closed geo formula at Delta = 0.01") {
  const auto spec = WaveguideSpec::from_v(ParticleKind::photon(), 5.0, 0.01);
  CHECK(delta_beta_geo(spec, QuantumNumbers(1, 1), ThetaConvention::CriticalAngle) == doctest::Approx(-5e-4));
  CHECK(delta_beta_geo(spec, QuantumNumbers(1, -1), ThetaConvention::CriticalAngle) == doctest::Approx(5e-4));
  CHECK(delta_beta_geo(spec, QuantumNumbers(-1, 1), ThetaConvention::CriticalAngle) == doctest::Approx(5e-4));
  CHECK(delta_beta_geo(spec, QuantumNumbers(-1, -1), ThetaConvention::CriticalAngle) == doctest::Approx(-5e-4));
  CHECK(delta_beta_geo(spec, QuantumNumbers(1, 0)) == 0.0);
  auto el = spec;
  el.particle = ParticleKind::electron();
  CHECK(delta_beta_geo(el, QuantumNumbers(1, 1), ThetaConvention::CriticalAngle) == doctest::Approx(-2.5e-4));
}

TEST_CASE("geo formula is the paraxial berry phase with lambda -> sigma, mu_h -> mu, theta -> sqrt(Delta)") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> d(1e-4, 0.2);
  std::uniform_real_distribution<double> a(0.3, 5.0);
  for (int i = 0; i < 200; ++i) {
    auto spec = WaveguideSpec::from_v(i % 2 ? ParticleKind::electron() : ParticleKind::photon(), 5.0, d(rng),
                                      RadialProfile::step(), a(rng));
    const int sigma = i % 3 ? 1 : -1;
    const int mu = i % 5 ? 1 : -1;
    const double theta = std::sqrt(spec.delta);
    const double geo = delta_beta_geo(spec, QuantumNumbers(sigma, mu * 2), theta);
    const double berry = berry_phase_per_z_paraxial(HelixGeometry{spec.a, theta, mu}, sigma, spec.particle.spin());
    CHECK(geo == doctest::Approx(berry).epsilon(1e-14));
  }
}

TEST_CASE("small-angle forms reproduce the exact helix within 1% for Delta <= 0.01") {
  for (double delta : {1e-4, 1e-3, 1e-2}) {
    const HelixGeometry g{1.0, std::sqrt(delta), 1};
    CHECK(berry_phase_per_z_paraxial(g, 1, 1.0) == doctest::Approx(berry_phase_per_z(g, 1, 1.0)).epsilon(0.01));
  }
}

TEST_CASE("comparison table against the scipy oracle") {
  // bracket factor and theta_mode at the largest guided |m|, Delta = 0.01
  struct Row {
    double v;
    int m;
    double bracket, theta;
  };
  const Row expect[] = {{10.0, 7, 0.8499062935949994, 0.07034875970507906},
                        {20.0, 16, 0.937039652474892, 0.0804028132203412},
                        {40.0, 34, 0.9373789469489286, 0.08541314407595568},
                        {80.0, 73, 0.9855414687573257, 0.09170934070295049}};
  const auto rows = compare_geo_vs_perturbative(WaveguideSpec{}, {10.0, 20.0, 40.0, 80.0});
  REQUIRE(rows.size() == 8);
  for (std::size_t i = 0; i < 4; ++i) {
    const auto& ph = rows[2 * i];
    const auto& el = rows[2 * i + 1];
    CHECK(ph.particle == Particle::Photon);
    CHECK(el.particle == Particle::Electron);
    CHECK(ph.m_ell_max == expect[i].m);
    CHECK(ph.bracket_factor == doctest::Approx(expect[i].bracket).epsilon(1e-9));
    CHECK(ph.theta_mode == doctest::Approx(expect[i].theta).epsilon(1e-12));
    // photon ratio is the bracket factor itself under the mode-matched theta
    CHECK(ph.ratio == doctest::Approx(ph.bracket_factor).epsilon(1e-13));
    CHECK(std::abs(el.ratio - 2.0 * ph.ratio) <= 1e-12 * el.ratio);
  }
  CHECK(std::abs(rows[6].ratio - 1.0) < std::abs(rows[4].ratio - 1.0));
  CHECK(std::abs(rows[6].ratio - 1.0) < 0.25);
}

TEST_CASE("empty sweep is a configuration error") {
  CHECK_THROWS_AS(compare_geo_vs_perturbative(WaveguideSpec{}, {}), Error);
}
