#include "soilab/soi_engine.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>
#include <queue>
#include <string>
#include <vector>

#include "soilab/bessel.hpp"

namespace soilab {

namespace {

void check_mode(const GuidedMode& mode, const QuantumNumbers& qn) {
  if (mode.m_abs != qn.m_abs()) {
    throw Error(ErrorCode::InvalidArgument, "mode was solved for |m| = " + std::to_string(mode.m_abs) +
                                                 " but the quantum numbers have |m| = " + std::to_string(qn.m_abs()));
  }
}

// Segment edges in x = rho / a for the chi' integral. Grid modes are piecewise cubic
// between samples, so inside the support of chi' every sample is an edge as well.
std::vector<double> quadrature_edges(const RadialProfile& profile, const GuidedMode& mode, double x_end) {
  std::vector<double> edges{0.0};
  double support_lo = 0.0;
  double support_hi = x_end;
  if (const auto* s = std::get_if<SmoothedStepProfile>(&profile.variant())) {
    support_lo = std::max(0.0, 1.0 - 12.0 * s->width);
    support_hi = std::min(x_end, 1.0 + 12.0 * s->width);
    const int pieces = 24;
    for (int i = 0; i <= pieces; ++i) edges.push_back(support_lo + (support_hi - support_lo) * i / pieces);
  } else {
    for (double r : profile.breakpoints()) edges.push_back(std::min(r, x_end));
    support_hi = std::min(x_end, profile.breakpoints().back());
  }
  if (mode.source == ModeSource::RadialGrid) {
    const auto& rs = mode.radial_samples;
    for (std::size_t i = 0; i < rs.values.size(); ++i) {
      const double x = rs.x0 + rs.dx * static_cast<double>(i);
      if (x > support_lo && x < support_hi) edges.push_back(x);
    }
  }
  edges.push_back(x_end);
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  return edges;
}

// Globally adaptive Gauss-Kronrod: keep bisecting the segment with the largest error
// estimate until the summed estimate is below 1e-11 of the total.
template <class F>
double adaptive_integral(F&& f, const std::vector<double>& edges, double& err_out) {
  using Gk = boost::math::quadrature::gauss_kronrod<double, 15>;
  struct Segment {
    double lo, hi, value, err;
    bool operator<(const Segment& o) const { return err < o.err; }
  };
  auto eval = [&](double lo, double hi) {
    double e = 0.0;
    const double v = Gk::integrate(f, lo, hi, 0, 0.0, &e);
    return Segment{lo, hi, v, e};
  };
  std::priority_queue<Segment> heap;
  double total = 0.0;
  double err = 0.0;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    auto seg = eval(edges[i], edges[i + 1]);
    total += seg.value;
    err += seg.err;
    heap.push(seg);
  }
  for (int iter = 0; iter < 200000 && err > 1e-11 * std::abs(total); ++iter) {
    const auto worst = heap.top();
    if (worst.hi - worst.lo < 1e-14) break;
    heap.pop();
    const double mid = 0.5 * (worst.lo + worst.hi);
    const auto left = eval(worst.lo, mid);
    const auto right = eval(mid, worst.hi);
    total += left.value + right.value - worst.value;
    err += left.err + right.err - worst.err;
    heap.push(left);
    heap.push(right);
  }
  // Recompute the sums from scratch to shed the drift of the running updates.
  total = 0.0;
  err = 0.0;
  while (!heap.empty()) {
    total += heap.top().value;
    err += heap.top().err;
    heap.pop();
  }
  err_out = err;
  return total;
}

}  // namespace

const char* to_string(SoiMethod m) {
  return m == SoiMethod::QuadratureGeneral ? "quadrature" : "step_closed_form";
}

double SoiCorrection::signed_delta_beta(const QuantumNumbers& qn) const {
  if (qn.m_abs() != m_abs) throw Error(ErrorCode::InvalidArgument, "quantum numbers do not match the correction's |m|");
  if (!qn.has_mu()) return 0.0;
  return -static_cast<double>(qn.sigma() * qn.mu()) * delta_beta_abs;
}

SoiCorrection delta_beta_quadrature(const WaveguideSpec& spec, const GuidedMode& mode, const QuantumNumbers& qn) {
  check_mode(mode, qn);
  if (!spec.profile.is_differentiable()) {
    throw Error(ErrorCode::WrongProfile, "quadrature needs a differentiable profile; use the step closed form");
  }
  SoiCorrection corr;
  corr.m_abs = qn.m_abs();
  corr.beta0 = mode.beta0;
  corr.method = SoiMethod::QuadratureGeneral;
  if (qn.m_abs() == 0) return corr;

  // In x = rho / a: int chi'(rho) psi^2 d rho = int dchi/dx psi(a x)^2 dx.
  const double x_end = mode.source == ModeSource::RadialGrid ? mode.radial_samples.x_end() : 30.0;
  const auto edges = quadrature_edges(spec.profile, mode, x_end);
  auto f = [&](double x) {
    const double p = mode.psi(x * mode.a);
    return spec.profile.dchi(x) * p * p;
  };
  double err = 0.0;
  const double integral = adaptive_integral(f, edges, err);
  if (!(err <= 1e-8 * std::abs(integral))) {
    throw Error(ErrorCode::QuadratureNotConverged,
                "chi' quadrature stalled at relative error " + std::to_string(err / std::abs(integral)));
  }
  corr.delta_beta_abs = qn.m_abs() * std::numbers::pi * spec.delta / (2.0 * mode.beta0) * mode.norm_N *
                        mode.norm_N * integral;
  return corr;
}

SoiCorrection delta_beta_step(const WaveguideSpec& spec, const GuidedMode& mode, const QuantumNumbers& qn) {
  check_mode(mode, qn);
  if (!spec.profile.is_step()) throw Error(ErrorCode::WrongProfile, "closed form applies to the step profile only");
  const double a = mode.a;
  const double jm = bessel::j(qn.m_abs(), mode.kappa_a());
  const double bracket = std::numbers::pi * a * a * mode.norm_N * mode.norm_N * jm * jm;
  SoiCorrection corr;
  corr.m_abs = qn.m_abs();
  corr.beta0 = mode.beta0;
  corr.method = SoiMethod::StepClosedForm;
  corr.bracket_factor = bracket;
  corr.delta_beta_abs = spec.delta / (2.0 * a) * (qn.m_abs() / (mode.beta0 * a)) * bracket;
  return corr;
}

SoiCorrection delta_beta(const WaveguideSpec& spec, const GuidedMode& mode, const QuantumNumbers& qn) {
  return spec.profile.is_step() ? delta_beta_step(spec, mode, qn) : delta_beta_quadrature(spec, mode, qn);
}

double soi_phase(const SoiCorrection& corr, const QuantumNumbers& qn, double z) {
  if (!(z >= 0.0)) throw Error(ErrorCode::InvalidArgument, "propagation distance must be >= 0");
  if (!qn.has_mu()) {
    if (corr.delta_beta_abs != 0.0) throw Error(ErrorCode::MuUndefined, "m_ell = 0 has no OAM handedness");
    return 0.0;
  }
  return corr.signed_delta_beta(qn) * z;
}

double delta_omega(const WaveguideSpec& spec, const GuidedMode& mode, const SoiCorrection& corr) {
  if (corr.delta_beta_abs == 0.0) return 0.0;
  return corr.delta_beta_abs * group_velocity(spec, mode);
}

}  // namespace soilab
