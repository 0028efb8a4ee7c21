#pragma once

#include <string>
#include <vector>

#include "soilab/core_types.hpp"
#include "soilab/tridiagonal.hpp"

/// Independent ground truth: a finite-difference radial eigensolver for
/// (nabla_T^2 + k^2(rho)) Psi = beta^2 Psi, with or without the spin-orbit term.
///
/// The radial operator -(1/rho)(rho psi')' + m^2/rho^2 psi is discretised on
/// cell centres rho_i = (i - 1/2) h with flux form, then symmetrised by
/// v_i = sqrt(rho_i) psi_i. The profile enters through exact cell averages of
/// chi, so a discontinuity that falls inside a cell costs O(h^2), not O(h).
namespace soilab::oracle {

struct RadialGrid {
  std::size_t n = 4096;
  double r_max = 6.0;  // in units of a; psi(r_max) = 0

  double spacing() const { return r_max / (static_cast<double>(n) + 0.5); }
  /// Cell centre i = 0..n-1, in units of a.
  double radius(std::size_t i) const { return (static_cast<double>(i) + 0.5) * spacing(); }
};

void validate_grid(const RadialGrid& grid);

struct GridEigen {
  double beta_sq;  // beta^2 in 1/length^2
  double u_sq;     // (kappa a)^2 = (k_core^2 - beta^2) a^2
  /// psi at the cell centres, normalised so that 2 pi sum psi_i^2 rho_i h = 1 (units of a).
  std::vector<double> psi;
};

/// Assembles the symmetric matrix whose eigenvalues are u^2 = (k_core^2 - beta^2) a^2.
/// With `soi` set, the diagonal SOI potential (Delta/2) sigma m_ell chi'(rho)/rho is added.
SymTridiagonal assemble(const WaveguideSpec& spec, int m_abs, const RadialGrid& grid,
                        const QuantumNumbers* soi = nullptr);

/// Guided eigenpairs (k_clad^2 < beta^2 < k_core^2), sorted by descending beta^2.
std::vector<GridEigen> eig_unperturbed(const WaveguideSpec& spec, int m_abs, const RadialGrid& grid);

struct PerturbedEigen {
  double beta_sq;
  double beta0;             // unperturbed beta for the same radial index and grid
  double delta_beta_exact;  // sqrt(beta_sq) - beta0, formed without cancellation
};

/// Eigenvalue including the SOI term for radial index p (1 = fundamental).
/// Requires a differentiable profile.
PerturbedEigen eig_perturbed(const WaveguideSpec& spec, const QuantumNumbers& qn, const RadialGrid& grid,
                             int p = 1);

/// Fixture record {spec, m, sigma, n, r_max, eigenvalues[]} as JSON text.
struct FixtureRecord {
  WaveguideSpec spec;
  int m = 0;
  int sigma = 1;
  RadialGrid grid;
  std::vector<double> eigenvalues;  // beta^2, descending
};

/// Guided beta^2 values, descending; the SOI term is included when the profile is
/// differentiable and m_ell != 0.
std::vector<double> guided_beta_sq(const WaveguideSpec& spec, int m_ell, int sigma, const RadialGrid& grid);
FixtureRecord make_fixture(const WaveguideSpec& spec, int m_ell, int sigma, const RadialGrid& grid);

std::string to_json(const std::vector<FixtureRecord>& records);
std::vector<FixtureRecord> fixtures_from_json(const std::string& text);

}  // namespace soilab::oracle
