#include "soilab/mode_solver.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "soilab/bessel.hpp"
#include "soilab/kernels.hpp"

namespace soilab {

namespace {

constexpr int kScanPoints = 2048;
constexpr int kSamplePoints = 4096;
constexpr double kSampleExtent = 3.0;  // samples cover [0, 3a]

struct DispersionTerms {
  double core;      // u J_{m-1}(u)
  double cladding;  // w K_{m-1}(w)/K_m(w) J_m(u)
};

DispersionTerms dispersion_terms(int m, double v, double u) {
  const double w_sq = v * v - u * u;
  const auto jp = bessel::j_pair(m, u);
  if (w_sq <= 0.0) return {u * jp.j_prev, 0.0};
  const double w = std::sqrt(w_sq);
  return {u * jp.j_prev, w * bessel::k_ratio(m, w) * jp.j};
}

double refine_root(int m, double v, double lo, double hi) {
  double f_lo = step_dispersion(m, v, lo);
  for (int it = 0; it < 200 && (hi - lo) > 1e-13 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double f_mid = step_dispersion(m, v, mid);
    if (f_mid == 0.0) return mid;
    if ((f_mid < 0.0) == (f_lo < 0.0)) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
    }
  }
  double u = 0.5 * (lo + hi);
  // One Newton polish with a centred-difference slope; kept only if it lowers the residual.
  const double du = 1e-7 * u;
  const double slope = (step_dispersion(m, v, u + du) - step_dispersion(m, v, u - du)) / (2.0 * du);
  const double f_u = step_dispersion(m, v, u);
  if (slope != 0.0 && std::isfinite(slope)) {
    const double candidate = u - f_u / slope;
    if (candidate > 0.0 && candidate < v && std::abs(step_dispersion(m, v, candidate)) < std::abs(f_u)) {
      u = candidate;
    }
  }
  return u;
}

std::vector<double> step_roots(int m, double v) {
  std::vector<double> us;
  std::vector<double> fs;
  us.reserve(kScanPoints + 1);
  for (int i = 1; i <= kScanPoints; ++i) us.push_back(v * i / (kScanPoints + 1.0));
  us.push_back(v);
  for (double u : us) fs.push_back(step_dispersion(m, v, u));

  std::vector<double> roots;
  for (std::size_t i = 0; i + 1 < us.size(); ++i) {
    double root = -1.0;
    if (fs[i] == 0.0) {
      root = us[i];
    } else if ((fs[i] < 0.0) != (fs[i + 1] < 0.0) && fs[i + 1] != 0.0) {
      root = refine_root(m, v, us[i], us[i + 1]);
    }
    if (root <= 0.0) continue;
    if (!roots.empty() && std::abs(root - roots.back()) < 1e-9) continue;
    roots.push_back(root);
  }
  // A root at u = V sits exactly on cutoff and is not guided.
  std::erase_if(roots, [&](double u) { return v * v - u * u <= 1e-24 * v * v; });
  for (double u : roots) {
    const auto t = dispersion_terms(m, v, u);
    const double scale = std::abs(t.core) + std::abs(t.cladding);
    if (!(std::abs(t.core + t.cladding) <= 1e-10 * scale)) {
      throw Error(ErrorCode::NumericalFailure, "dispersion root residual above 1e-10 for m = " + std::to_string(m));
    }
  }
  return roots;
}

GuidedMode make_step_mode(const WaveguideSpec& spec, int m, int p, double u) {
  const double v = spec.v_number();
  const double a = spec.a;
  const double w = std::sqrt(v * v - u * u);
  GuidedMode mode;
  mode.m_abs = m;
  mode.p = p;
  mode.a = a;
  mode.source = ModeSource::StepAnalytic;
  mode.kappa = u / a;
  mode.decay_cladding = w / a;
  const double ka = spec.k_core * a;
  mode.beta0 = std::sqrt(ka * ka - u * u) / a;

  const auto jp = bessel::j_pair(m, u);
  const double j_next = (2.0 * m / u) * jp.j - jp.j_prev;
  const double r = bessel::k_ratio(m, w);
  const double core = 0.5 * a * a * (jp.j * jp.j - jp.j_prev * j_next);
  const double clad = 0.5 * a * a * jp.j * jp.j * (r * (r + 2.0 * m / w) - 1.0);
  mode.norm_N = 1.0 / std::sqrt(2.0 * std::numbers::pi * (core + clad));

  mode.radial_samples.x0 = 0.0;
  mode.radial_samples.dx = kSampleExtent / (kSamplePoints - 1);
  mode.radial_samples.m_abs = m;
  mode.radial_samples.values.resize(kSamplePoints);
  for (int i = 0; i < kSamplePoints; ++i) {
    mode.radial_samples.values[static_cast<std::size_t>(i)] = mode.psi(a * mode.radial_samples.dx * i);
  }
  return mode;
}

std::vector<GuidedMode> grid_modes(const WaveguideSpec& spec, int m, int max_p, const ModeSolverOptions& options) {
  const oracle::RadialGrid grid = resolve_grid(spec, m, options);
  auto eig = oracle::eig_unperturbed(spec, m, grid);
  if (eig.size() > static_cast<std::size_t>(max_p)) eig.resize(static_cast<std::size_t>(max_p));
  std::vector<GuidedMode> modes;
  const double a = spec.a;
  const double k_clad_sq = spec.k_clad() * spec.k_clad();
  for (std::size_t i = 0; i < eig.size(); ++i) {
    GuidedMode mode;
    mode.m_abs = m;
    mode.p = static_cast<int>(i) + 1;
    mode.a = a;
    mode.source = ModeSource::RadialGrid;
    mode.beta0 = std::sqrt(eig[i].beta_sq);
    mode.kappa = std::sqrt(eig[i].u_sq) / a;
    mode.decay_cladding = std::sqrt(std::max(0.0, eig[i].beta_sq - k_clad_sq));
    mode.norm_N = 1.0 / a;  // psi carries the normalisation in units of a
    mode.radial_samples.x0 = grid.radius(0);
    mode.radial_samples.dx = grid.spacing();
    mode.radial_samples.m_abs = m;
    mode.radial_samples.values = std::move(eig[i].psi);
    modes.push_back(std::move(mode));
  }
  return modes;
}

}  // namespace

double RadialSamples::at(double x) const {
  const std::size_t n = values.size();
  if (n < 4 || x > x_end()) return 0.0;
  const double f = (x - x0) / dx;
  auto k = static_cast<long>(std::floor(f)) - 1;  // stencil k .. k+3
  k = std::min(k, static_cast<long>(n) - 4);
  const double parity = (m_abs % 2 == 0) ? 1.0 : -1.0;
  auto sample = [&](long idx) {
    if (idx >= 0) return values[static_cast<std::size_t>(idx)];
    // position x0 + idx dx < 0 mirrors to -(x0 + idx dx) = x0 + j dx
    const long j = std::lround((-(x0 + static_cast<double>(idx) * dx) - x0) / dx);
    return parity * values[static_cast<std::size_t>(j)];
  };
  const double t = f - static_cast<double>(k);  // in [0, 4)
  double result = 0.0;
  for (int i = 0; i < 4; ++i) {
    double basis = 1.0;
    for (int j = 0; j < 4; ++j) {
      if (j != i) basis *= (t - j) / static_cast<double>(i - j);
    }
    result += basis * sample(k + i);
  }
  return result;
}

double GuidedMode::psi(double rho) const {
  const double x = std::abs(rho) / a;
  if (source == ModeSource::RadialGrid) return radial_samples.at(x);
  const double u = kappa_a();
  if (x <= 1.0) return bessel::j(m_abs, u * x);
  const double w = decay_a();
  return bessel::j(m_abs, u) * std::exp(bessel::log_k(m_abs, w * x) - bessel::log_k(m_abs, w));
}

oracle::RadialGrid resolve_grid(const WaveguideSpec& spec, int m_abs, const ModeSolverOptions& options) {
  oracle::RadialGrid grid = options.grid;
  if (grid.r_max > 0.0) return grid;
  // Size the box from the slowest step-profile decay among the guided modes of this |m|.
  const double v = spec.v_number();
  const auto roots = step_roots(m_abs, v);
  double w_est = 0.0;
  if (!roots.empty()) w_est = std::sqrt(std::max(0.0, v * v - roots.back() * roots.back()));
  const double r_max = w_est > 0.0 ? std::max(6.0, 1.0 + 30.0 / w_est) : 40.0;
  grid.r_max = std::min(r_max, 200.0);
  const double scaled = std::ceil(static_cast<double>(options.grid.n) * grid.r_max / 6.0);
  grid.n = std::min<std::size_t>(static_cast<std::size_t>(scaled), std::size_t{1} << 18);
  return grid;
}

double step_dispersion(int m_abs, double v, double u) {
  const auto t = dispersion_terms(m_abs, v, u);
  return t.core + t.cladding;
}

std::vector<GuidedMode> solve_modes(const WaveguideSpec& spec, int m_abs, int max_p, const ModeSolverOptions& options) {
  require_valid(spec);
  if (m_abs < 0) throw Error(ErrorCode::InvalidArgument, "m_abs must be >= 0");
  if (max_p < 1) return {};
  if (!spec.profile.is_step()) return grid_modes(spec, m_abs, max_p, options);

  const auto roots = step_roots(m_abs, spec.v_number());
  std::vector<GuidedMode> modes;
  for (std::size_t i = 0; i < roots.size() && static_cast<int>(i) < max_p; ++i) {
    modes.push_back(make_step_mode(spec, m_abs, static_cast<int>(i) + 1, roots[i]));
  }
  return modes;
}

GuidedMode solve_mode(const WaveguideSpec& spec, int m_abs, int p, const ModeSolverOptions& options) {
  if (p < 1) throw Error(ErrorCode::InvalidArgument, "radial index p starts at 1");
  auto modes = solve_modes(spec, m_abs, p, options);
  if (static_cast<int>(modes.size()) < p) {
    throw Error(ErrorCode::NoGuidedMode, "no guided mode with |m| = " + std::to_string(m_abs) +
                                             ", p = " + std::to_string(p) + " (below cutoff)");
  }
  return std::move(modes[static_cast<std::size_t>(p - 1)]);
}

int max_guided_m(const WaveguideSpec& spec) {
  require_valid(spec);
  if (!spec.profile.is_step()) throw Error(ErrorCode::WrongProfile, "max_guided_m needs the step profile");
  const double v = spec.v_number();
  int m = 0;
  while (m < static_cast<int>(v) + 2 && !step_roots(m + 1, v).empty()) ++m;
  return m;
}

double normalization_integral(const GuidedMode& mode) {
  const double two_pi_n2 = 2.0 * std::numbers::pi * mode.norm_N * mode.norm_N;
  if (mode.source == ModeSource::RadialGrid) {
    const auto& s = mode.radial_samples;
    std::vector<double> weights(s.values.size());
    for (std::size_t i = 0; i < weights.size(); ++i) {
      weights[i] = (s.x0 + s.dx * static_cast<double>(i)) * s.dx * mode.a * mode.a;
    }
    return two_pi_n2 * kernels::weighted_sum_sq(s.values, weights);
  }
  using Gk = boost::math::quadrature::gauss_kronrod<double, 15>;
  auto f = [&](double rho) {
    const double v = mode.psi(rho);
    return v * v * rho;
  };
  double total = Gk::integrate(f, 0.0, mode.a, 12, 1e-11);
  // Cladding in chunks of a few decay lengths until the tail is negligible.
  const double chunk = 5.0 / std::max(mode.decay_cladding, 1e-3 / mode.a);
  double lo = mode.a;
  for (int i = 0; i < 200; ++i) {
    const double part = Gk::integrate(f, lo, lo + chunk, 12, 1e-11);
    total += part;
    lo += chunk;
    if (std::abs(part) < 1e-17 * total) break;
  }
  return two_pi_n2 * total;
}

double omega_of(const WaveguideSpec& spec) {
  return spec.particle.kind() == Particle::Photon ? spec.k_core : 0.5 * spec.k_core * spec.k_core;
}

WaveguideSpec rescale_frequency(const WaveguideSpec& spec, double factor) {
  WaveguideSpec out = spec;
  out.k_core = spec.k_core * factor;
  if (spec.particle.kind() == Particle::Electron) out.delta = spec.delta / (factor * factor);
  return out;
}

double group_velocity(const WaveguideSpec& spec, const GuidedMode& mode, const ModeSolverOptions& options) {
  constexpr double h = 1e-5;
  const WaveguideSpec plus = rescale_frequency(spec, 1.0 + h);
  const WaveguideSpec minus = rescale_frequency(spec, 1.0 - h);
  ModeSolverOptions fixed = options;
  // Both re-solves must share one grid, or the difference picks up discretisation jumps.
  if (!spec.profile.is_step()) fixed.grid = resolve_grid(spec, mode.m_abs, options);
  try {
    const double b_plus = solve_mode(plus, mode.m_abs, mode.p, fixed).beta0;
    const double b_minus = solve_mode(minus, mode.m_abs, mode.p, fixed).beta0;
    return (omega_of(plus) - omega_of(minus)) / (b_plus - b_minus);
  } catch (const Error& e) {
    throw Error(ErrorCode::NumericalFailure, std::string("group velocity re-solve failed: ") + e.what());
  }
}

}  // namespace soilab
