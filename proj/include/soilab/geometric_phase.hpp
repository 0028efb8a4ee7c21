#pragma once

#include <vector>

#include "soilab/core_types.hpp"

namespace soilab {

/// Helical ray of radius a whose direction makes angle theta with the axis.
struct HelixGeometry {
  double a = 1.0;
  double theta = 0.1;  // radians, 0 < theta < pi/2
  int mu_h = 1;        // handedness

  double pitch() const;        // h_z = 2 pi a / tan(theta)
  double solid_angle() const;  // Omega = 4 pi sin^2(theta / 2)
};

void validate(const HelixGeometry& g);

/// gamma / h_z = -lambda mu_h s Omega / h_z.
double berry_phase_per_z(const HelixGeometry& g, int lambda, double s);
/// Same with the small-angle forms Omega = pi theta^2 and h_z = 2 pi a / theta.
double berry_phase_per_z_paraxial(const HelixGeometry& g, int lambda, double s);

enum class ThetaConvention { CriticalAngle, ModeMatched };

/// -sigma mu s (Delta / 2a) theta with theta = sqrt(Delta) (CriticalAngle) or
/// |m| / (beta0 a) of the p = 1 step mode (ModeMatched). Zero for m_ell = 0.
double delta_beta_geo(const WaveguideSpec& spec, const QuantumNumbers& qn,
                      ThetaConvention convention = ThetaConvention::ModeMatched);
/// Explicit-theta form.
double delta_beta_geo(const WaveguideSpec& spec, const QuantumNumbers& qn, double theta);

struct ComparisonRow {
  double v = 0.0;
  int m_ell_max = 0;
  double theta_mode = 0.0;  // |m| / (beta0 a)
  double bracket_factor = 0.0;
  double delta_beta_step = 0.0;  // |db| a
  double delta_beta_geo = 0.0;   // |db_geo| a
  double ratio = 0.0;            // delta_beta_step / delta_beta_geo
  Particle particle = Particle::Photon;
};

/// For each V (step profile, delta and a from `base`) the largest guided |m| with p = 1,
/// for both particle kinds. Rows ordered by V, then photon before electron.
std::vector<ComparisonRow> compare_geo_vs_perturbative(const WaveguideSpec& base, const std::vector<double>& v_values);

}  // namespace soilab
