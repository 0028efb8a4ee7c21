#include "soilab/evolution.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "soilab/kernels.hpp"
#include "soilab/parallel.hpp"

namespace soilab {

namespace {

constexpr double kPi = std::numbers::pi;

void require_nonzero(int m_ell) {
  if (m_ell == 0) throw Error(ErrorCode::InvalidArgument, "superpositions need m_ell != 0");
}

void require_sigma(int sigma) {
  if (sigma != 1 && sigma != -1) throw Error(ErrorCode::InvalidArgument, "sigma must be +1 or -1");
}

double wrap(double x, double period) {
  x = std::fmod(x, period);
  if (x > 0.5 * period) x -= period;
  if (x <= -0.5 * period) x += period;
  return x;
}

void unwrap(std::vector<double>& v, double period) {
  for (std::size_t i = 1; i < v.size(); ++i) {
    v[i] = v[i - 1] + wrap(v[i] - v[i - 1], period);
  }
}

}  // namespace

double SpinOrbitState::norm() const {
  double s = 0.0;
  for (const auto& c : amplitudes) s += std::norm(c);
  return std::sqrt(s);
}

SpinOrbitState make_superposition_a(int sigma, int m_ell) {
  require_sigma(sigma);
  require_nonzero(m_ell);
  SpinOrbitState s;
  s.m_abs = std::abs(m_ell);
  const int mu = m_ell > 0 ? 1 : -1;
  s.amplitudes[SpinOrbitState::slot(sigma, mu)] = std::numbers::sqrt2 / 2;
  s.amplitudes[SpinOrbitState::slot(-sigma, mu)] = std::numbers::sqrt2 / 2;
  return s;
}

SpinOrbitState make_superposition_b(int sigma, int m_ell) {
  require_sigma(sigma);
  require_nonzero(m_ell);
  SpinOrbitState s;
  s.m_abs = std::abs(m_ell);
  s.amplitudes[SpinOrbitState::slot(sigma, 1)] = std::numbers::sqrt2 / 2;
  s.amplitudes[SpinOrbitState::slot(sigma, -1)] = std::numbers::sqrt2 / 2;
  return s;
}

double expect_lz(const SpinOrbitState& s) {
  double v = 0.0;
  for (std::size_t i = 0; i < 4; ++i) v += SpinOrbitState::slot_mu(i) * s.m_abs * std::norm(s.amplitudes[i]);
  return v;
}

double expect_sigma_z(const SpinOrbitState& s) {
  double v = 0.0;
  for (std::size_t i = 0; i < 4; ++i) v += SpinOrbitState::slot_sigma(i) * std::norm(s.amplitudes[i]);
  return v;
}

SpinOrbitState evolve_phase(const SpinOrbitState& state, double phase) {
  SpinOrbitState out = state;
  for (std::size_t i = 0; i < 4; ++i) {
    const double sm = SpinOrbitState::slot_sigma(i) * SpinOrbitState::slot_mu(i);
    out.amplitudes[i] *= std::polar(1.0, -sm * phase);
  }
  return out;
}

SpinOrbitState evolve(const SpinOrbitState& state, const SoiCorrection& corr, const EvolutionVariant& variant) {
  if (corr.m_abs != state.m_abs) {
    throw Error(ErrorCode::InvalidArgument, "correction is for |m| = " + std::to_string(corr.m_abs) +
                                                 ", state has |m| = " + std::to_string(state.m_abs));
  }
  const double phase = std::visit(
      [&](const auto& v) -> double {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Spatial>) {
          return corr.delta_beta_abs * v.z;
        } else {
          return v.delta_omega * v.t;
        }
      },
      variant);
  return evolve_phase(state, phase);
}

double AzimuthalPattern::at(double phi) const {
  return mean + std::real(harmonic * std::polar(1.0, 2.0 * m_abs * phi));
}

std::vector<double> AzimuthalPattern::sample(std::size_t n) const {
  std::vector<double> cos_tab(n), sin_tab(n), out(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double arg = 2.0 * m_abs * 2.0 * kPi * static_cast<double>(j) / static_cast<double>(n);
    cos_tab[j] = std::cos(arg);
    sin_tab[j] = std::sin(arg);
  }
  kernels::harmonic_synth(mean, harmonic.real(), -harmonic.imag(), cos_tab, sin_tab, out);
  return out;
}

AzimuthalPattern pattern_of(const SpinOrbitState& s) {
  AzimuthalPattern p;
  p.m_abs = s.m_abs;
  for (int sigma : {1, -1}) {
    const cplx plus = s.amplitudes[SpinOrbitState::slot(sigma, 1)];
    const cplx minus = s.amplitudes[SpinOrbitState::slot(sigma, -1)];
    p.mean += std::norm(plus) + std::norm(minus);
    p.harmonic += 2.0 * plus * std::conj(minus);
  }
  return p;
}

AzimuthalPattern reference_pattern(int m_abs) { return pattern_of(make_superposition_b(1, m_abs)); }

double pattern_angle(const AzimuthalPattern& pattern, const AzimuthalPattern& reference, std::size_t grid) {
  if (pattern.m_abs != reference.m_abs) throw Error(ErrorCode::InvalidArgument, "patterns differ in |m|");
  if (std::abs(pattern.harmonic) <= 1e-12 * pattern.mean || std::abs(reference.harmonic) <= 1e-12 * reference.mean) {
    throw Error(ErrorCode::PatternUndefined, "intensity has no azimuthal structure (OAM eigenstate)");
  }
  const int m = pattern.m_abs;
  const double period = kPi / m;

  const auto ref = reference.sample(grid);
  const auto sig = pattern.sample(grid);
  std::vector<double> corr(grid);
  kernels::cross_correlate(ref, sig, corr);
  std::size_t best = 0;
  for (std::size_t k = 1; k < grid; ++k) {
    if (corr[k] > corr[best]) best = k;
  }
  const double coarse = 2.0 * kPi * static_cast<double>(best) / static_cast<double>(grid);

  // Harmonic phase: C = C_ref exp(-2 i |m| delta).
  const double fine = (std::arg(reference.harmonic) - std::arg(pattern.harmonic)) / (2.0 * m);
  const double branch = coarse + wrap(fine - coarse, period);
  return wrap(branch, period);
}

Observables observables(const SpinOrbitState& s, ParticleKind particle, std::size_t n_phi,
                        const std::optional<AzimuthalPattern>& reference) {
  Observables o;
  if (particle.kind() == Particle::Photon) {
    double s0 = 0, s1 = 0, s2 = 0, s3 = 0;
    for (int mu : {1, -1}) {
      const cplx cp = s.amplitudes[SpinOrbitState::slot(1, mu)];
      const cplx cm = s.amplitudes[SpinOrbitState::slot(-1, mu)];
      const cplx ex = (cp + cm) * (std::numbers::sqrt2 / 2);
      const cplx ey = cplx(0, 1) * (cp - cm) * (std::numbers::sqrt2 / 2);
      s0 += std::norm(ex) + std::norm(ey);
      s1 += std::norm(ex) - std::norm(ey);
      const cplx xy = std::conj(ex) * ey;
      s2 += 2.0 * xy.real();
      s3 += 2.0 * xy.imag();
    }
    o.spin_vector = {s1 / s0, s2 / s0, s3 / s0};
    o.polarization_angle = 0.5 * std::atan2(s2, s1);
  } else {
    double sx = 0, sy = 0, sz = 0;
    for (int mu : {1, -1}) {
      const cplx up = s.amplitudes[SpinOrbitState::slot(1, mu)];
      const cplx dn = s.amplitudes[SpinOrbitState::slot(-1, mu)];
      const cplx c = std::conj(up) * dn;
      sx += 2.0 * c.real();
      sy += 2.0 * c.imag();
      sz += std::norm(up) - std::norm(dn);
    }
    o.spin_vector = {0.5 * sx, 0.5 * sy, 0.5 * sz};
    o.polarization_angle = std::atan2(sy, sx);
  }
  const auto pat = pattern_of(s);
  o.intensity_profile = pat.sample(n_phi);
  try {
    o.pattern_angle = pattern_angle(pat, reference ? *reference : reference_pattern(s.m_abs));
  } catch (const Error& e) {
    if (e.code() != ErrorCode::PatternUndefined) throw;
  }
  return o;
}

std::vector<SweepPoint> rotation_sweep(const SpinOrbitState& initial, ParticleKind particle,
                                       const std::vector<double>& phases) {
  std::vector<SweepPoint> out(phases.size());
  const auto ref = pattern_of(initial);
  parallel_for(phases.size(), [&](std::size_t i) {
    const auto st = evolve_phase(initial, phases[i]);
    const auto o = observables(st, particle, 16, ref);
    out[i] = SweepPoint{phases[i], o.polarization_angle, o.pattern_angle, st.norm()};
  });

  std::vector<double> pol(out.size());
  for (std::size_t i = 0; i < out.size(); ++i) pol[i] = out[i].polarization_angle;
  unwrap(pol, particle.kind() == Particle::Photon ? kPi : 2.0 * kPi);
  for (std::size_t i = 0; i < out.size(); ++i) out[i].polarization_angle = pol[i];

  const bool has_pattern = !out.empty() && out.front().pattern_angle.has_value();
  if (has_pattern) {
    std::vector<double> pat(out.size());
    for (std::size_t i = 0; i < out.size(); ++i) pat[i] = *out[i].pattern_angle;
    unwrap(pat, kPi / initial.m_abs);
    for (std::size_t i = 0; i < out.size(); ++i) out[i].pattern_angle = pat[i];
  }
  return out;
}

LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw Error(ErrorCode::InvalidArgument, "fit needs >= 2 paired points");
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  LinearFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  for (std::size_t i = 0; i < x.size(); ++i) {
    f.max_residual = std::max(f.max_residual, std::abs(y[i] - (f.intercept + f.slope * x[i])));
  }
  return f;
}

double fidelity(const SpinOrbitState& a, const SpinOrbitState& b) {
  cplx ip = 0.0;
  for (std::size_t i = 0; i < 4; ++i) ip += std::conj(a.amplitudes[i]) * b.amplitudes[i];
  return std::norm(ip);
}

}  // namespace soilab
