#pragma once

#include <array>
#include <complex>
#include <optional>
#include <variant>
#include <vector>

#include "soilab/core_types.hpp"
#include "soilab/soi_engine.hpp"

namespace soilab {

using cplx = std::complex<double>;

/// State in the four-dimensional space {sigma = +-1} x {m = +-|m|} of one radial mode.
/// Slot order: (+,+|m|), (+,-|m|), (-,+|m|), (-,-|m|).
struct SpinOrbitState {
  std::array<cplx, 4> amplitudes{};
  int m_abs = 1;

  static constexpr std::size_t slot(int sigma, int mu) { return (sigma > 0 ? 0u : 2u) + (mu > 0 ? 0u : 1u); }
  static constexpr int slot_sigma(std::size_t s) { return s < 2 ? 1 : -1; }
  static constexpr int slot_mu(std::size_t s) { return s % 2 == 0 ? 1 : -1; }

  double norm() const;
};

/// (Psi_{sigma m} + Psi_{-sigma m}) / sqrt 2: balanced in SAM at fixed m_ell.
SpinOrbitState make_superposition_a(int sigma, int m_ell);
/// (Psi_{sigma m} + Psi_{sigma -m}) / sqrt 2: balanced in OAM at fixed sigma.
SpinOrbitState make_superposition_b(int sigma, int m_ell);

/// <L_z> and <S_z> (units of hbar, S_z = sigma s).
double expect_lz(const SpinOrbitState& s);
double expect_sigma_z(const SpinOrbitState& s);

struct Spatial {
  double z = 0.0;
};
struct Temporal {
  double t = 0.0;
  double delta_omega = 0.0;  // |delta omega|
};
using EvolutionVariant = std::variant<Spatial, Temporal>;

/// Multiplies each slot by exp(-i sigma mu |db| z), or exp(-i sigma mu |dw| t) for Temporal.
SpinOrbitState evolve(const SpinOrbitState& state, const SoiCorrection& corr, const EvolutionVariant& variant);
/// Same with the accumulated phase |db| z given directly.
SpinOrbitState evolve_phase(const SpinOrbitState& state, double phase);

/// I(phi) = A + Re(C exp(2 i |m| phi)) summed over both SAM components.
struct AzimuthalPattern {
  double mean = 0.0;  // A
  cplx harmonic;      // C
  int m_abs = 1;
  double at(double phi) const;
  std::vector<double> sample(std::size_t n) const;
};

AzimuthalPattern pattern_of(const SpinOrbitState& state);
/// The z = 0 pattern of make_superposition_b, proportional to cos^2(|m| phi).
AzimuthalPattern reference_pattern(int m_abs);

/// Azimuthal shift delta with I(phi) ~ I_ref(phi - delta), in (-pi/(2|m|), pi/(2|m|)].
/// Coarse argmax of the cross-correlation on a 1024-point grid, refined with the phase of
/// the 2|m| harmonic. Throws PatternUndefined when the pattern has no azimuthal structure.
double pattern_angle(const AzimuthalPattern& pattern, const AzimuthalPattern& reference, std::size_t grid = 1024);

struct Observables {
  /// Electron: <S> in units of hbar. Photon: normalised Stokes vector (S1, S2, S3) / S0.
  std::array<double, 3> spin_vector{};
  /// Photon: polarization azimuth 0.5 atan2(S2, S1). Electron: azimuth atan2(<Sy>, <Sx>).
  double polarization_angle = 0.0;
  std::optional<double> pattern_angle;
  std::vector<double> intensity_profile;  // I(phi_j), phi_j = 2 pi j / n
};

Observables observables(const SpinOrbitState& state, ParticleKind particle, std::size_t n_phi = 1024,
                        const std::optional<AzimuthalPattern>& reference = std::nullopt);

struct SweepPoint {
  double phase = 0.0;  // |db| z
  double polarization_angle = 0.0;
  std::optional<double> pattern_angle;
  double norm = 0.0;
};

/// Evolves `initial` to each phase |db| z and records the observables. Angles are unwrapped
/// along the sweep (polarization period pi for photons and 2 pi for electrons, pattern
/// period pi/|m|). The pattern reference is the initial state's pattern.
std::vector<SweepPoint> rotation_sweep(const SpinOrbitState& initial, ParticleKind particle,
                                       const std::vector<double>& phases);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double max_residual = 0.0;
};
LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

/// |<a|b>|^2.
double fidelity(const SpinOrbitState& a, const SpinOrbitState& b);

}  // namespace soilab
