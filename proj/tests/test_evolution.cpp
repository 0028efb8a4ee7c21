#include <doctest.h>

#include <cmath>
#include <initializer_list>
#include <numbers>

#include "soilab/evolution.hpp"

using namespace soilab;

namespace {

constexpr double kPi = std::numbers::pi;

SoiCorrection corr_for(int m_abs, double dba) {
  SoiCorrection c;
  c.m_abs = m_abs;
  c.delta_beta_abs = dba;
  return c;
}

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> v(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = a + (b - a) * i / (n - 1);
  return v;
}

}  // namespace

TEST_CASE("superposition a") {
  const auto s = make_superposition_a(1, 2);
  const double r = std::numbers::sqrt2 / 2;
  CHECK(s.amplitudes[0] == cplx(r, 0));
  CHECK(s.amplitudes[1] == cplx(0, 0));
  CHECK(s.amplitudes[2] == cplx(r, 0));
  CHECK(s.amplitudes[3] == cplx(0, 0));
  CHECK(s.norm() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(expect_lz(s) == doctest::Approx(2.0));
  CHECK_THROWS_AS(make_superposition_a(1, 0), Error);
}

TEST_CASE("superposition b") {
  const auto s = make_superposition_b(1, 2);
  const double r = std::numbers::sqrt2 / 2;
  CHECK(s.amplitudes[0] == cplx(r, 0));
  CHECK(s.amplitudes[1] == cplx(r, 0));
  CHECK(std::abs(s.amplitudes[2]) == 0.0);
  CHECK(expect_sigma_z(s) == doctest::Approx(1.0));
  // cos^2(2 phi) shape at z = 0
  const auto p = pattern_of(s);
  for (double phi : {0.0, 0.3, 1.1, 2.9}) {
    CHECK(p.at(phi) == doctest::Approx(2.0 * std::pow(std::cos(2 * phi), 2)).epsilon(1e-14));
  }
  CHECK_THROWS_AS(make_superposition_b(1, 0), Error);
  CHECK_THROWS_AS(make_superposition_b(0, 1), Error);
}

TEST_CASE("evolve at z = 0 is the identity and preserves norm") {
  const auto s = make_superposition_a(-1, 3);
  const auto c = corr_for(3, 0.25);
  const auto e0 = evolve(s, c, Spatial{0.0});
  for (std::size_t i = 0; i < 4; ++i) CHECK(e0.amplitudes[i] == s.amplitudes[i]);
  for (double z : {0.1, 7.0, 1e4}) CHECK(std::abs(evolve(s, c, Spatial{z}).norm() - 1.0) < 1e-12);
  CHECK_THROWS_AS(evolve(s, corr_for(2, 0.1), Spatial{1.0}), Error);
}

TEST_CASE("photon polarization rotates by |db| z with sense mu") {
  for (int mu : {1, -1}) {
    const auto s = make_superposition_a(1, mu * 2);
    const auto o0 = observables(s, ParticleKind::photon());
    CHECK(o0.polarization_angle == doctest::Approx(0.0).scale(1.0));
    CHECK(o0.spin_vector[0] == doctest::Approx(1.0));
    const auto o = observables(evolve_phase(s, 0.3), ParticleKind::photon());
    CHECK(o.polarization_angle == doctest::Approx(mu * 0.3).epsilon(1e-13));
    // pi/2: x -> mu y (angle pi/2 is the same axis as -pi/2)
    const auto q = observables(evolve_phase(s, kPi / 2), ParticleKind::photon());
    CHECK(q.spin_vector[0] == doctest::Approx(-1.0));
  }
}

TEST_CASE("electron spin turns at twice the photon rate") {
  for (int mu : {1, -1}) {
    const auto s = make_superposition_a(1, mu);
    const auto o = observables(evolve_phase(s, kPi / 4), ParticleKind::electron());
    CHECK(o.spin_vector[0] == doctest::Approx(0.0).scale(1.0));
    CHECK(o.spin_vector[1] == doctest::Approx(0.5 * mu));
    CHECK(o.spin_vector[2] == doctest::Approx(0.0).scale(1.0));
    double len = 0;
    for (double c : o.spin_vector) len += c * c;
    CHECK(std::sqrt(len) <= 0.5 + 1e-15);
  }
}

TEST_CASE("pattern rotates by sigma |db| z / |m|") {
  for (int sigma : {1, -1}) {
    const auto s = make_superposition_b(sigma, 2);
    const auto o = observables(evolve_phase(s, kPi / 4), ParticleKind::photon());
    REQUIRE(o.pattern_angle.has_value());
    CHECK(*o.pattern_angle == doctest::Approx(sigma * kPi / 8).epsilon(1e-13));
    // spin is constant for an SAM eigenstate
    const auto e0 = observables(s, ParticleKind::electron());
    const auto e1 = observables(evolve_phase(s, 1.234), ParticleKind::electron());
    for (int k = 0; k < 3; ++k) CHECK(e0.spin_vector[k] == doctest::Approx(e1.spin_vector[k]).scale(1.0));
  }
}

TEST_CASE("pattern angle is undefined for an OAM eigenstate") {
  const auto s = make_superposition_a(1, 2);
  CHECK_FALSE(observables(s, ParticleKind::photon()).pattern_angle.has_value());
  CHECK_THROWS_AS(pattern_angle(pattern_of(s), reference_pattern(2)), Error);
}

TEST_CASE("coarse cross-correlation agrees with the harmonic refinement") {
  const auto ref = reference_pattern(3);
  for (double shift : {0.01, 0.2, -0.4, 0.5}) {
    const auto p = pattern_of(evolve_phase(make_superposition_b(1, 3), 3 * shift));
    const double got = pattern_angle(p, ref);
    const double period = kPi / 3;
    double expect = std::fmod(shift, period);
    if (expect > period / 2) expect -= period;
    if (expect <= -period / 2) expect += period;
    CHECK(got == doctest::Approx(expect).epsilon(1e-12).scale(1.0));
  }
}

TEST_CASE("sweep slopes over one beat period") {
  const double dba = 3.7e-5;
  const double beat = kPi / dba;
  std::vector<double> phases;
  for (double z : linspace(0.0, beat, 201)) phases.push_back(dba * z);

  for (int mu : {1, -1}) {
    const auto ph = rotation_sweep(make_superposition_a(1, mu * 2), ParticleKind::photon(), phases);
    const auto el = rotation_sweep(make_superposition_a(1, mu * 2), ParticleKind::electron(), phases);
    std::vector<double> x, yp, ye;
    for (std::size_t i = 0; i < ph.size(); ++i) {
      x.push_back(ph[i].phase / dba);
      yp.push_back(ph[i].polarization_angle);
      ye.push_back(el[i].polarization_angle);
      CHECK(std::abs(ph[i].norm - 1.0) < 1e-12);
    }
    const auto fp = fit_line(x, yp);
    const auto fe = fit_line(x, ye);
    CHECK(fp.slope == doctest::Approx(mu * dba).epsilon(1e-6));
    CHECK(fe.slope == doctest::Approx(2 * mu * dba).epsilon(1e-6));
    CHECK(fp.max_residual < 1e-8);
  }
  for (int sigma : {1, -1}) {
    const auto sw = rotation_sweep(make_superposition_b(sigma, 2), ParticleKind::photon(), phases);
    std::vector<double> x, y;
    for (const auto& p : sw) {
      x.push_back(p.phase / dba);
      y.push_back(*p.pattern_angle);
    }
    const auto f = fit_line(x, y);
    CHECK(f.slope == doctest::Approx(sigma * dba / 2).epsilon(1e-6));
    CHECK(f.max_residual < 1e-8);
  }
}

TEST_CASE("temporal and spatial variants coincide") {
  const auto s = make_superposition_b(-1, 2);
  const auto c = corr_for(2, 2e-4);
  const double z = 1234.5;
  const double dw = 1.9e-4;
  const double t = c.delta_beta_abs * z / dw;
  CHECK(fidelity(evolve(s, c, Spatial{z}), evolve(s, c, Temporal{t, dw})) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("beating of the split modes reproduces evolve") {
  const double beta0 = 49.9;
  const auto c = corr_for(1, 3e-5);
  const double z = 777.0;
  SpinOrbitState s;
  s.m_abs = 1;
  s.amplitudes = {cplx(0.5, 0.1), cplx(-0.3, 0.4), cplx(0.2, -0.6), cplx(0.1, 0.0)};
  const double n = s.norm();
  for (auto& a : s.amplitudes) a /= n;
  SpinOrbitState beat = s;
  for (std::size_t i = 0; i < 4; ++i) {
    const QuantumNumbers qn(SpinOrbitState::slot_sigma(i), SpinOrbitState::slot_mu(i));
    beat.amplitudes[i] *= std::polar(1.0, (beta0 + c.signed_delta_beta(qn)) * z);
  }
  // common phase exp(i beta0 z) drops out of |<a|b>|^2; relative phases carry the SOI
  const auto ev = evolve(s, c, Spatial{z});
  CHECK(fidelity(ev, beat) == doctest::Approx(1.0).epsilon(1e-12));
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(std::abs(beat.amplitudes[i] * std::polar(1.0, -beta0 * z) - ev.amplitudes[i]) < 1e-9);
  }
}

TEST_CASE("fit_line recovers an exact line") {
  const auto x = linspace(0, 1, 11);
  std::vector<double> y;
  for (double v : x) y.push_back(2.5 * v - 1.0);
  const auto f = fit_line(x, y);
  CHECK(f.slope == doctest::Approx(2.5));
  CHECK(f.intercept == doctest::Approx(-1.0));
  CHECK(f.max_residual < 1e-14);
}
