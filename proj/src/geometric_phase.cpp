#include "soilab/geometric_phase.hpp"

#include <cmath>
#include <numbers>

#include "soilab/mode_solver.hpp"
#include "soilab/parallel.hpp"
#include "soilab/soi_engine.hpp"

namespace soilab {

namespace {

constexpr double kPi = std::numbers::pi;

void check_lambda(int lambda) {
  if (lambda != 1 && lambda != -1) throw Error(ErrorCode::InvalidArgument, "helicity must be +1 or -1");
}

}  // namespace

double HelixGeometry::pitch() const { return 2.0 * kPi * a / std::tan(theta); }

double HelixGeometry::solid_angle() const {
  const double s = std::sin(0.5 * theta);
  return 4.0 * kPi * s * s;
}

void validate(const HelixGeometry& g) {
  if (!(g.a > 0.0)) throw Error(ErrorCode::InvalidArgument, "helix radius must be > 0");
  if (!(g.theta > 0.0 && g.theta < 0.5 * kPi)) throw Error(ErrorCode::InvalidArgument, "theta must lie in (0, pi/2)");
  if (g.mu_h != 1 && g.mu_h != -1) throw Error(ErrorCode::InvalidArgument, "handedness must be +1 or -1");
}

double berry_phase_per_z(const HelixGeometry& g, int lambda, double s) {
  validate(g);
  check_lambda(lambda);
  return -lambda * g.mu_h * s * g.solid_angle() / g.pitch();
}

double berry_phase_per_z_paraxial(const HelixGeometry& g, int lambda, double s) {
  validate(g);
  check_lambda(lambda);
  const double omega = kPi * g.theta * g.theta;
  const double h_z = 2.0 * kPi * g.a / g.theta;
  return -lambda * g.mu_h * s * omega / h_z;
}

double delta_beta_geo(const WaveguideSpec& spec, const QuantumNumbers& qn, double theta) {
  if (!qn.has_mu()) return 0.0;
  return -qn.sigma() * qn.mu() * spec.particle.spin() * spec.delta / (2.0 * spec.a) * theta;
}

double delta_beta_geo(const WaveguideSpec& spec, const QuantumNumbers& qn, ThetaConvention convention) {
  if (!spec.profile.is_step()) throw Error(ErrorCode::WrongProfile, "geometric comparison uses the step profile");
  if (!qn.has_mu()) return 0.0;
  double theta = std::sqrt(spec.delta);
  if (convention == ThetaConvention::ModeMatched) {
    const auto mode = solve_mode(spec, qn.m_abs(), 1);
    theta = qn.m_abs() / (mode.beta0 * spec.a);
  }
  return delta_beta_geo(spec, qn, theta);
}

std::vector<ComparisonRow> compare_geo_vs_perturbative(const WaveguideSpec& base, const std::vector<double>& v_values) {
  if (v_values.empty()) throw Error(ErrorCode::InvalidArgument, "empty V sweep");
  std::vector<ComparisonRow> rows(2 * v_values.size());
  parallel_for(v_values.size(), [&](std::size_t i) {
    for (int k = 0; k < 2; ++k) {
      const auto particle = k == 0 ? ParticleKind::photon() : ParticleKind::electron();
      const auto spec = WaveguideSpec::from_v(particle, v_values[i], base.delta, RadialProfile::step(), base.a);
      const int m = max_guided_m(spec);
      ComparisonRow row;
      row.v = v_values[i];
      row.m_ell_max = m;
      row.particle = particle.kind();
      if (m > 0) {
        const QuantumNumbers qn(1, m);
        const auto mode = solve_mode(spec, m, 1);
        const auto corr = delta_beta_step(spec, mode, qn);
        row.theta_mode = m / (mode.beta0 * spec.a);
        row.bracket_factor = *corr.bracket_factor;
        row.delta_beta_step = corr.delta_beta_abs * spec.a;
        row.delta_beta_geo = std::abs(delta_beta_geo(spec, qn, row.theta_mode)) * spec.a;
        row.ratio = row.delta_beta_step / row.delta_beta_geo;
      }
      rows[2 * i + static_cast<std::size_t>(k)] = row;
    }
  });
  return rows;
}

}  // namespace soilab
