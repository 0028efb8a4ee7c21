#include "soilab/core_types.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace soilab {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::NoGuidedMode: return "NoGuidedMode";
    case ErrorCode::NumericalFailure: return "NumericalFailure";
    case ErrorCode::QuadratureNotConverged: return "QuadratureNotConverged";
    case ErrorCode::WrongProfile: return "WrongProfile";
    case ErrorCode::MuUndefined: return "MuUndefined";
    case ErrorCode::PatternUndefined: return "PatternUndefined";
    case ErrorCode::BasisMismatch: return "BasisMismatch";
    case ErrorCode::ProtocolStepFailed: return "ProtocolStepFailed";
  }
  return "Unknown";
}

const char* to_string(Particle p) { return p == Particle::Electron ? "electron" : "photon"; }

Particle parse_particle(const std::string& name) {
  if (name == "electron") return Particle::Electron;
  if (name == "photon") return Particle::Photon;
  throw Error(ErrorCode::InvalidArgument, "unknown particle '" + name + "'");
}

QuantumNumbers::QuantumNumbers(int sigma, int m_ell) : sigma_(sigma), m_ell_(m_ell) {
  if (sigma != 1 && sigma != -1) {
    throw Error(ErrorCode::InvalidArgument, "sigma must be +1 or -1, got " + std::to_string(sigma));
  }
}

int QuantumNumbers::mu() const {
  if (m_ell_ == 0) throw Error(ErrorCode::MuUndefined, "mu is undefined for m_ell = 0");
  return m_ell_ > 0 ? 1 : -1;
}

namespace {

constexpr double kInvSqrtPi = 0.5641895835477562869;

double erf_step(double x, double w) { return 0.5 * (1.0 + std::erf((x - 1.0) / w)); }

// Antiderivative of erf_step in x.
double erf_step_primitive(double x, double w) {
  const double y = (x - 1.0) / w;
  return 0.5 * (x + w * (y * std::erf(y) + kInvSqrtPi * std::exp(-y * y)));
}

struct TabSegment {
  std::size_t index;
  double t;
};

// Locate x in the tabulated radii: index of the left sample and the fraction inside the segment.
TabSegment locate(const TabulatedProfile& tab, double x) {
  const auto& r = tab.radii;
  if (x <= r.front()) return {0, 0.0};
  if (x >= r.back()) return {r.size() - 1, 0.0};
  const auto it = std::upper_bound(r.begin(), r.end(), x);
  const std::size_t i = static_cast<std::size_t>(it - r.begin()) - 1;
  return {i, (x - r[i]) / (r[i + 1] - r[i])};
}

double tab_chi(const TabulatedProfile& tab, double x) {
  const auto [i, t] = locate(tab, x);
  if (i + 1 >= tab.radii.size()) return tab.chi.back();
  return tab.chi[i] + t * (tab.chi[i + 1] - tab.chi[i]);
}

double tab_dchi(const TabulatedProfile& tab, double x) {
  if (x < tab.radii.front() || x >= tab.radii.back()) return 0.0;
  const auto [i, t] = locate(tab, x);
  (void)t;
  return (tab.chi[i + 1] - tab.chi[i]) / (tab.radii[i + 1] - tab.radii[i]);
}

double tab_primitive(const TabulatedProfile& tab, double x) {
  // Integral of chi from radii.front() to x; chi is held constant outside the table.
  const auto& r = tab.radii;
  const auto& c = tab.chi;
  if (x <= r.front()) return c.front() * (x - r.front());
  double acc = 0.0;
  std::size_t i = 0;
  for (; i + 1 < r.size() && r[i + 1] <= x; ++i) acc += 0.5 * (c[i] + c[i + 1]) * (r[i + 1] - r[i]);
  if (i + 1 < r.size()) {
    const double cx = tab_chi(tab, x);
    acc += 0.5 * (c[i] + cx) * (x - r[i]);
  } else {
    acc += c.back() * (x - r.back());
  }
  return acc;
}

}  // namespace

RadialProfile::RadialProfile(Variant v) : variant_(std::move(v)) {
  if (const auto* s = std::get_if<SmoothedStepProfile>(&variant_)) {
    if (s->width > 0.0) t0_ = erf_step(0.0, s->width);
  }
}

double RadialProfile::chi(double x) const {
  return std::visit(
      [&](const auto& p) -> double {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, StepProfile>) {
          return x >= 1.0 ? 1.0 : 0.0;
        } else if constexpr (std::is_same_v<T, SmoothedStepProfile>) {
          return (erf_step(x, p.width) - t0_) / (1.0 - t0_);
        } else {
          return tab_chi(p, x);
        }
      },
      variant_);
}

double RadialProfile::dchi(double x) const {
  return std::visit(
      [&](const auto& p) -> double {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, StepProfile>) {
          return 0.0;
        } else if constexpr (std::is_same_v<T, SmoothedStepProfile>) {
          const double y = (x - 1.0) / p.width;
          return kInvSqrtPi / p.width * std::exp(-y * y) / (1.0 - t0_);
        } else {
          return tab_dchi(p, x);
        }
      },
      variant_);
}

double RadialProfile::integral(double lo, double hi) const {
  return std::visit(
      [&](const auto& p) -> double {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, StepProfile>) {
          return std::max(0.0, hi - std::max(lo, 1.0)) - std::max(0.0, lo - std::max(hi, 1.0));
        } else if constexpr (std::is_same_v<T, SmoothedStepProfile>) {
          const double g = erf_step_primitive(hi, p.width) - erf_step_primitive(lo, p.width);
          return (g - t0_ * (hi - lo)) / (1.0 - t0_);
        } else {
          return tab_primitive(p, hi) - tab_primitive(p, lo);
        }
      },
      variant_);
}

std::vector<double> RadialProfile::breakpoints() const {
  if (const auto* t = std::get_if<TabulatedProfile>(&variant_)) return t->radii;
  return {1.0};
}

std::string RadialProfile::describe() const {
  return std::visit(
      [](const auto& p) -> std::string {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, StepProfile>) {
          return "step";
        } else if constexpr (std::is_same_v<T, SmoothedStepProfile>) {
          std::ostringstream os;
          os.precision(17);
          os << "smooth:" << p.width;
          return os.str();
        } else {
          return "tabulated:" + std::to_string(p.radii.size());
        }
      },
      variant_);
}

double WaveguideSpec::v_number() const { return k_core * a * std::sqrt(delta); }

double WaveguideSpec::k_clad() const { return k_core * std::sqrt(1.0 - delta); }

WaveguideSpec WaveguideSpec::from_v(ParticleKind particle, double v, double delta, RadialProfile profile,
                                    double a) {
  WaveguideSpec spec;
  spec.particle = particle;
  spec.a = a;
  spec.delta = delta;
  spec.profile = std::move(profile);
  spec.k_core = delta > 0.0 ? v / (a * std::sqrt(delta)) : 0.0;
  return spec;
}

ValidationReport validate_spec(const WaveguideSpec& spec) {
  ValidationReport report;
  auto violate = [&](std::string msg) { report.violations.push_back(std::move(msg)); };

  if (!(spec.a > 0.0) || !std::isfinite(spec.a)) violate("a must be positive");
  if (!(spec.delta > 0.0 && spec.delta < 1.0)) {
    violate("delta must lie in (0, 1)");
  } else if (spec.delta > 0.1) {
    report.warnings.push_back("delta > 0.1 is outside the delta << 1 (weak-guidance) regime");
  }
  if (!(spec.k_core * spec.a > 0.0) || !std::isfinite(spec.k_core)) violate("k_core * a must be positive");

  const auto& profile = spec.profile;
  if (const auto* s = std::get_if<SmoothedStepProfile>(&profile.variant())) {
    if (!(s->width > 0.0) || !std::isfinite(s->width)) violate("smoothed-step width must be positive");
  }
  if (const auto* t = std::get_if<TabulatedProfile>(&profile.variant())) {
    if (t->radii.size() < 2 || t->radii.size() != t->chi.size()) {
      violate("tabulated profile needs >= 2 samples with matching radii and chi");
      return report;
    }
    if (!std::is_sorted(t->radii.begin(), t->radii.end()) ||
        std::adjacent_find(t->radii.begin(), t->radii.end()) != t->radii.end()) {
      violate("tabulated radii must be strictly increasing");
      return report;
    }
    if (t->radii.front() != 0.0) violate("tabulated profile must start at rho = 0");
    if (t->radii.back() < 1.0) violate("tabulated profile must extend to rho >= a");
  }
  if (!report.valid()) return report;

  if (std::abs(profile.chi(0.0)) > 1e-12) violate("chi(0) != 0");
  // Monotonicity by sampling 1000 sorted radii on [0, 3a].
  double prev = profile.chi(0.0);
  bool monotone = true;
  for (int i = 1; i < 1000; ++i) {
    const double x = 3.0 * i / 999.0;
    const double c = profile.chi(x);
    if (c < prev - 1e-15) monotone = false;
    prev = c;
  }
  if (!monotone) violate("chi is not monotonically non-decreasing");
  if (const auto* t = std::get_if<TabulatedProfile>(&profile.variant())) {
    for (std::size_t i = 0; i < t->radii.size(); ++i) {
      if (t->radii[i] >= 1.0 && std::abs(t->chi[i] - 1.0) > 1e-12) {
        violate("chi != 1 for rho >= a");
        break;
      }
    }
  } else {
    const auto* s = std::get_if<SmoothedStepProfile>(&profile.variant());
    const double tail_start = 1.0 + (s ? 6.0 * s->width : 0.0);
    if (std::abs(profile.chi(tail_start + 1e-9) - 1.0) > 1e-12) violate("chi does not reach 1 outside the core");
  }
  return report;
}

void require_valid(const WaveguideSpec& spec) {
  const auto report = validate_spec(spec);
  if (report.valid()) return;
  std::string msg;
  for (const auto& v : report.violations) msg += (msg.empty() ? "" : "; ") + v;
  throw Error(ErrorCode::InvalidArgument, msg);
}

}  // namespace soilab
