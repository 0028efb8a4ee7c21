#include <doctest.h>

#include <cmath>
#include <fstream>
#include <sstream>

#include "soilab/mode_solver.hpp"
#include "soilab/oracle.hpp"
#include "soilab/soi_engine.hpp"

using namespace soilab;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream f(path);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

struct Gap {
  double delta_beta;  // |db_exact - db_pert|
  double beta_sq;     // |beta^2 - beta0^2 - 2 beta0 db_pert|
};

Gap first_order_gap(double delta, int m, const oracle::RadialGrid& grid) {
  const auto spec = WaveguideSpec::from_v(ParticleKind::photon(), 5.0, delta, RadialProfile::smoothed_step(0.05));
  ModeSolverOptions opt;
  opt.grid = grid;
  const auto mode = solve_mode(spec, m, 1, opt);
  const QuantumNumbers qn(1, m);
  const double pert = delta_beta_quadrature(spec, mode, qn).signed_delta_beta(qn);
  const auto ex = oracle::eig_perturbed(spec, qn, grid);
  return {std::abs(ex.delta_beta_exact - pert),
          std::abs(ex.beta_sq - ex.beta0 * ex.beta0 - 2.0 * ex.beta0 * pert)};
}

}  // namespace

TEST_CASE("grid eigenvalues match the step dispersion roots") {
  const auto spec = WaveguideSpec::from_v(ParticleKind::photon(), 5.0, 0.01);
  const oracle::RadialGrid grid{4096, 6.0};
  for (int m : {0, 1, 2}) {
    CAPTURE(m);
    const auto grid_modes = oracle::eig_unperturbed(spec, m, grid);
    const auto roots = solve_modes(spec, m, 10);
    REQUIRE(grid_modes.size() == roots.size());
    for (std::size_t i = 0; i < roots.size(); ++i) {
      CHECK(std::abs(std::sqrt(grid_modes[i].beta_sq) - roots[i].beta0) < 1e-4 * spec.k_core);
    }
  }
  CHECK(oracle::eig_unperturbed(spec, 0, grid).size() == 2);
  CHECK(oracle::eig_unperturbed(spec, 3, grid).empty());
}

TEST_CASE("no guided mode below cutoff") {
  const auto spec = WaveguideSpec::from_v(ParticleKind::photon(), 2.0, 0.01);
  CHECK(oracle::eig_unperturbed(spec, 1, {4096, 8.0}).empty());
  CHECK(oracle::eig_unperturbed(spec, 0, {4096, 8.0}).size() == 1);
}

TEST_CASE("fundamental mode is positive near the axis and normalised") {
  const auto spec = WaveguideSpec::from_v(ParticleKind::photon(), 5.0, 0.01, RadialProfile::smoothed_step(0.05));
  const oracle::RadialGrid grid{4096, 6.0};
  const auto e = oracle::eig_unperturbed(spec, 0, grid);
  REQUIRE_FALSE(e.empty());
  CHECK(e[0].psi[0] > 0.0);
  double sum = 0.0;
  for (std::size_t i = 0; i < grid.n; ++i) sum += e[0].psi[i] * e[0].psi[i] * grid.radius(i);
  CHECK(2.0 * M_PI * sum * grid.spacing() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("grid refinement") {
  const auto spec = WaveguideSpec::from_v(ParticleKind::photon(), 5.0, 0.01, RadialProfile::smoothed_step(0.05));
  const double k_sq = spec.k_core * spec.k_core;
  for (int m : {0, 1, 2}) {
    CAPTURE(m);
    const auto coarse = oracle::guided_beta_sq(spec, m, 1, {4096, 6.0});
    const auto fine = oracle::guided_beta_sq(spec, m, 1, {8192, 6.0});
    REQUIRE(coarse.size() == fine.size());
    for (std::size_t i = 0; i < fine.size(); ++i) CHECK(std::abs(coarse[i] - fine[i]) < 1e-6 * k_sq);
  }
}

TEST_CASE("spin-orbit term: sign structure and m = 0") {
  const auto spec = WaveguideSpec::from_v(ParticleKind::electron(), 5.0, 0.01, RadialProfile::smoothed_step(0.05));
  const oracle::RadialGrid grid{4096, 6.0};
  for (int m : {1, 2}) {
    const double pp = oracle::eig_perturbed(spec, QuantumNumbers(1, m), grid).delta_beta_exact;
    const double pm = oracle::eig_perturbed(spec, QuantumNumbers(1, -m), grid).delta_beta_exact;
    const double mp = oracle::eig_perturbed(spec, QuantumNumbers(-1, m), grid).delta_beta_exact;
    const double mm = oracle::eig_perturbed(spec, QuantumNumbers(-1, -m), grid).delta_beta_exact;
    CHECK(pp < 0.0);
    CHECK(pm > 0.0);
    CHECK(pp == mm);
    CHECK(pm == mp);
    // first order is antisymmetric; the second-order remainder is common to both signs
    CHECK(std::abs(pp + pm) < 0.01 * std::abs(pp));
  }
  const auto zero = oracle::eig_perturbed(spec, QuantumNumbers(1, 0), grid);
  CHECK(zero.delta_beta_exact == 0.0);
  CHECK(oracle::guided_beta_sq(spec, 0, 1, grid) == oracle::guided_beta_sq(spec, 0, -1, grid));
}

TEST_CASE("perturbed eigenvalue needs a differentiable profile") {
  const auto spec = WaveguideSpec::from_v(ParticleKind::photon(), 5.0, 0.01);
  CHECK_THROWS_AS(oracle::eig_perturbed(spec, QuantumNumbers(1, 1), {1024, 6.0}), Error);
  CHECK_THROWS_AS(oracle::validate_grid({1, 6.0}), Error);
  CHECK_THROWS_AS(oracle::validate_grid({1024, -1.0}), Error);
}

TEST_CASE("first-order agreement improves as delta shrinks at fixed V") {
  const oracle::RadialGrid grid{4096, 8.0};
  const Gap g2 = first_order_gap(0.02, 1, grid);
  const Gap g1 = first_order_gap(0.01, 1, grid);
  // beta^2 error is second order in delta; db = d(beta^2) / 2 beta0 carries one more sqrt(delta)
  CHECK(g2.beta_sq / g1.beta_sq == doctest::Approx(4.0).epsilon(0.05));
  CHECK(g2.delta_beta / g1.delta_beta == doctest::Approx(std::pow(2.0, 2.5)).epsilon(0.05));
}

TEST_CASE("fixture regression") {
  const auto records = oracle::fixtures_from_json(slurp(std::string(SOILAB_FIXTURE_DIR) + "/oracle_fixtures.json"));
  REQUIRE(records.size() == 9);
  for (const auto& r : records) {
    CAPTURE(r.m);
    CAPTURE(r.sigma);
    const auto now = oracle::guided_beta_sq(r.spec, r.m, r.sigma, r.grid);
    REQUIRE(now.size() == r.eigenvalues.size());
    for (std::size_t i = 0; i < now.size(); ++i) CHECK(now[i] == doctest::Approx(r.eigenvalues[i]).epsilon(1e-12));
  }
}
