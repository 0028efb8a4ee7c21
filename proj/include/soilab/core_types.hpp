#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "soilab/error.hpp"

/// Shared domain types. Lengths are measured in units of the core radius a,
/// wavenumbers in units of 1/a. Physical constants are absorbed into k_core.
namespace soilab {

enum class Particle { Electron, Photon };

/// Particle species together with its spin. s is 1/2 for electrons and 1 for photons.
class ParticleKind {
 public:
  constexpr explicit ParticleKind(Particle kind) : kind_(kind) {}

  static constexpr ParticleKind electron() { return ParticleKind(Particle::Electron); }
  static constexpr ParticleKind photon() { return ParticleKind(Particle::Photon); }

  constexpr Particle kind() const { return kind_; }
  constexpr double spin() const { return kind_ == Particle::Electron ? 0.5 : 1.0; }
  constexpr bool operator==(const ParticleKind&) const = default;

 private:
  Particle kind_;
};

const char* to_string(Particle p);
Particle parse_particle(const std::string& name);

/// SAM quantum number sigma = +-1 and OAM quantum number m_ell.
class QuantumNumbers {
 public:
  QuantumNumbers(int sigma, int m_ell);

  int sigma() const { return sigma_; }
  int m_ell() const { return m_ell_; }
  int m_abs() const { return m_ell_ < 0 ? -m_ell_ : m_ell_; }
  bool has_mu() const { return m_ell_ != 0; }
  /// OAM handedness m_ell/|m_ell|; throws MuUndefined for m_ell = 0.
  int mu() const;

  bool operator==(const QuantumNumbers&) const = default;

 private:
  int sigma_;
  int m_ell_;
};

struct StepProfile {};

/// Error-function step: chi = (T(rho) - T(0)) / (1 - T(0)), T = (1 + erf((rho - a)/w)) / 2.
struct SmoothedStepProfile {
  double width;  // in units of a
};

/// chi sampled on a radial grid; linear between samples, held at the last sample beyond it.
struct TabulatedProfile {
  std::vector<double> radii;
  std::vector<double> chi;
};

/// Normalized radial profile chi(x) of the index / potential step, with the
/// radial coordinate x = rho / a measured in units of the core radius.
class RadialProfile {
 public:
  using Variant = std::variant<StepProfile, SmoothedStepProfile, TabulatedProfile>;

  RadialProfile() : variant_(StepProfile{}) {}
  explicit RadialProfile(Variant v);

  static RadialProfile step() { return RadialProfile(StepProfile{}); }
  static RadialProfile smoothed_step(double width) { return RadialProfile(SmoothedStepProfile{width}); }
  static RadialProfile tabulated(std::vector<double> radii, std::vector<double> chi) {
    return RadialProfile(TabulatedProfile{std::move(radii), std::move(chi)});
  }

  bool is_step() const { return std::holds_alternative<StepProfile>(variant_); }
  bool is_differentiable() const { return !is_step(); }
  const Variant& variant() const { return variant_; }

  double chi(double rho) const;
  /// d chi / dx. Zero almost everywhere for Step (the delta at rho = a is not representable).
  double dchi(double rho) const;
  /// Exact integral of chi over [lo, hi].
  double integral(double lo, double hi) const;
  /// Points around which dchi is concentrated; quadrature subdivides there.
  std::vector<double> breakpoints() const;
  std::string describe() const;

 private:
  Variant variant_;
  double t0_ = 0.0;  // T(0) for the smoothed step
};

struct WaveguideSpec {
  ParticleKind particle = ParticleKind::photon();
  double a = 1.0;
  double delta = 0.01;
  RadialProfile profile;
  double k_core = 50.0;

  /// Guide strength V = k_core a sqrt(delta).
  double v_number() const;
  double k_clad() const;

  /// Builds a spec from V instead of k_core.
  static WaveguideSpec from_v(ParticleKind particle, double v, double delta,
                              RadialProfile profile = RadialProfile::step(), double a = 1.0);
};

struct ValidationReport {
  std::vector<std::string> violations;
  std::vector<std::string> warnings;

  bool valid() const { return violations.empty(); }
};

ValidationReport validate_spec(const WaveguideSpec& spec);

/// Throws InvalidArgument listing every violation when the spec is not valid.
void require_valid(const WaveguideSpec& spec);

}  // namespace soilab
