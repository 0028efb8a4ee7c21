#pragma once

#include <vector>

#include "soilab/core_types.hpp"
#include "soilab/oracle.hpp"

namespace soilab {

/// psi sampled on a uniform radial grid (x = rho / a), interpolated with cubic
/// Lagrange stencils; parity (-1)^m supplies ghost values for x < 0.
struct RadialSamples {
  double x0 = 0.0;  // first sample position
  double dx = 0.0;
  int m_abs = 0;
  std::vector<double> values;

  double x_end() const { return x0 + dx * static_cast<double>(values.size() - 1); }
  double at(double x) const;
};

enum class ModeSource { StepAnalytic, RadialGrid };

/// One guided solution N psi_|m|(kappa rho) e^{i m phi} of the unperturbed problem.
struct GuidedMode {
  int m_abs = 0;
  int p = 1;
  double beta0 = 0.0;           // 1/length
  double kappa = 0.0;           // 1/length
  double decay_cladding = 0.0;  // 1/length
  double norm_N = 0.0;          // 1/length
  double a = 1.0;               // core radius the mode was solved for
  ModeSource source = ModeSource::StepAnalytic;
  RadialSamples radial_samples;

  double kappa_a() const { return kappa * a; }
  double decay_a() const { return decay_cladding * a; }
  /// Unnormalised psi at rho (length units). For step modes this is J_m(kappa rho)
  /// in the core and J_m(kappa a) K_m(gamma rho)/K_m(gamma a) outside.
  double psi(double rho) const;
};

struct ModeSolverOptions {
  /// Radial grid for non-step profiles. r_max = 0 picks a size from the decay length.
  oracle::RadialGrid grid{8192, 0.0};
};

/// Grid used for non-step profiles: options.grid as given, or (r_max = 0) a box of
/// about 30 decay lengths with the spacing of options.grid over [0, 6a].
oracle::RadialGrid resolve_grid(const WaveguideSpec& spec, int m_abs, const ModeSolverOptions& options);

/// Pole-free step-profile dispersion function
/// F(u) = u J_{m-1}(u) + w (K_{m-1}(w)/K_m(w)) J_m(u), w = sqrt(V^2 - u^2), u = kappa a;
/// F(V) is the w -> 0 limit.
double step_dispersion(int m_abs, double v, double u);

/// All guided modes with azimuthal index m_abs and p <= max_p, sorted by descending beta0.
/// Empty below cutoff.
std::vector<GuidedMode> solve_modes(const WaveguideSpec& spec, int m_abs, int max_p,
                                    const ModeSolverOptions& options = {});

/// The mode with radial index p; throws NoGuidedMode when it is not guided.
GuidedMode solve_mode(const WaveguideSpec& spec, int m_abs, int p = 1, const ModeSolverOptions& options = {});

/// Largest m_abs with at least one guided mode (step profile).
int max_guided_m(const WaveguideSpec& spec);

/// 2 pi N^2 int psi^2 rho drho evaluated numerically (should be 1).
double normalization_integral(const GuidedMode& mode);

/// Angular frequency in the dimensionless units used by group_velocity:
/// photon omega = k_core (c / n_core = 1), electron omega = k_core^2 / 2 (hbar = m = 1).
double omega_of(const WaveguideSpec& spec);

/// d omega / d beta by a centred difference in k_core (h = 1e-5). Photons keep delta
/// fixed; electrons keep the well depth k_core^2 delta fixed.
double group_velocity(const WaveguideSpec& spec, const GuidedMode& mode, const ModeSolverOptions& options = {});

/// The spec with k_core scaled by `factor` under the particle's dispersion law.
WaveguideSpec rescale_frequency(const WaveguideSpec& spec, double factor);

}  // namespace soilab
