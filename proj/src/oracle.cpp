#include "soilab/oracle.hpp"

#include <cmath>
#include <numbers>

#include <json.hpp>

#include "soilab/spec_io.hpp"

namespace soilab::oracle {

void validate_grid(const RadialGrid& grid) {
  if (grid.n < 64) throw Error(ErrorCode::InvalidArgument, "radial grid needs at least 64 points");
  if (!(grid.r_max >= 6.0)) throw Error(ErrorCode::InvalidArgument, "radial grid r_max must be >= 6a");
}

SymTridiagonal assemble(const WaveguideSpec& spec, int m_abs, const RadialGrid& grid, const QuantumNumbers* soi) {
  require_valid(spec);
  validate_grid(grid);
  if (m_abs < 0) throw Error(ErrorCode::InvalidArgument, "m_abs must be >= 0");
  const std::size_t n = grid.n;
  const double h = grid.spacing();
  const double v_sq = spec.v_number() * spec.v_number();
  const double m_sq = static_cast<double>(m_abs) * m_abs;
  const auto& profile = spec.profile;

  double soi_coeff = 0.0;
  if (soi) {
    if (soi->m_abs() != m_abs) throw Error(ErrorCode::InvalidArgument, "quantum numbers do not match m_abs");
    if (!profile.is_differentiable()) {
      throw Error(ErrorCode::WrongProfile, "the SOI oracle needs a differentiable profile");
    }
    soi_coeff = 0.5 * spec.delta * soi->sigma() * soi->m_ell();
  }

  SymTridiagonal t;
  t.diag.resize(n);
  t.off.resize(n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = grid.radius(i);
    const double x_lo = static_cast<double>(i) * h;
    const double x_hi = static_cast<double>(i + 1) * h;
    const double chi_avg = profile.integral(x_lo, x_hi) / h;
    double d = (x_hi + x_lo) / (h * h * x) + m_sq / (x * x) + v_sq * chi_avg;
    if (soi) d += soi_coeff * (profile.chi(x_hi) - profile.chi(x_lo)) / (h * x);
    t.diag[i] = d;
    if (i + 1 < n) t.off[i] = -x_hi / (h * h * std::sqrt(x * grid.radius(i + 1)));
  }
  return t;
}

namespace {

std::vector<double> psi_from_vector(const std::vector<double>& v, const RadialGrid& grid) {
  const double h = grid.spacing();
  const double scale = 1.0 / std::sqrt(2.0 * std::numbers::pi * h);
  std::vector<double> psi(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) psi[i] = scale * v[i] / std::sqrt(grid.radius(i));
  return psi;
}

double beta_sq_from_u_sq(const WaveguideSpec& spec, double u_sq) {
  const double ka = spec.k_core * spec.a;
  return (ka * ka - u_sq) / (spec.a * spec.a);
}

}  // namespace

std::vector<GridEigen> eig_unperturbed(const WaveguideSpec& spec, int m_abs, const RadialGrid& grid) {
  const SymTridiagonal t = assemble(spec, m_abs, grid);
  const double v_sq = spec.v_number() * spec.v_number();
  const auto values = eigenvalues_below(t, v_sq);
  std::vector<GridEigen> out;
  out.reserve(values.size());
  for (double u_sq : values) {
    if (!(u_sq > 0.0)) continue;  // cannot happen for a valid profile; guards round-off at V -> 0
    out.push_back({beta_sq_from_u_sq(spec, u_sq), u_sq, psi_from_vector(eigenvector(t, u_sq), grid)});
  }
  return out;
}

PerturbedEigen eig_perturbed(const WaveguideSpec& spec, const QuantumNumbers& qn, const RadialGrid& grid, int p) {
  if (p < 1) throw Error(ErrorCode::InvalidArgument, "radial index p starts at 1");
  const int m_abs = qn.m_abs();
  const double v_sq = spec.v_number() * spec.v_number();
  const auto base = eigenvalues_below(assemble(spec, m_abs, grid), v_sq);
  const auto pert = eigenvalues_below(assemble(spec, m_abs, grid, &qn), v_sq);
  const auto idx = static_cast<std::size_t>(p - 1);
  if (idx >= base.size() || idx >= pert.size()) {
    throw Error(ErrorCode::NoGuidedMode, "no guided grid mode with p = " + std::to_string(p));
  }
  PerturbedEigen r;
  r.beta_sq = beta_sq_from_u_sq(spec, pert[idx]);
  r.beta0 = std::sqrt(beta_sq_from_u_sq(spec, base[idx]));
  const double beta = std::sqrt(r.beta_sq);
  r.delta_beta_exact = -(pert[idx] - base[idx]) / (spec.a * spec.a * (beta + r.beta0));
  return r;
}

std::vector<double> guided_beta_sq(const WaveguideSpec& spec, int m_ell, int sigma, const RadialGrid& grid) {
  const QuantumNumbers qn(sigma, m_ell);
  const bool with_soi = spec.profile.is_differentiable() && m_ell != 0;
  const double v_sq = spec.v_number() * spec.v_number();
  const auto u_sq = eigenvalues_below(assemble(spec, qn.m_abs(), grid, with_soi ? &qn : nullptr), v_sq);
  std::vector<double> out;
  for (double u : u_sq) {
    if (u > 0.0) out.push_back(beta_sq_from_u_sq(spec, u));
  }
  return out;  // ascending u^2 is descending beta^2
}

FixtureRecord make_fixture(const WaveguideSpec& spec, int m_ell, int sigma, const RadialGrid& grid) {
  FixtureRecord r;
  r.spec = spec;
  r.m = m_ell;
  r.sigma = sigma;
  r.grid = grid;
  r.eigenvalues = guided_beta_sq(spec, m_ell, sigma, grid);
  return r;
}

std::string to_json(const std::vector<FixtureRecord>& records) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : records) {
    arr.push_back({{"spec", soilab::to_json(r.spec)},
                   {"m", r.m},
                   {"sigma", r.sigma},
                   {"n", r.grid.n},
                   {"r_max", r.grid.r_max},
                   {"eigenvalues", r.eigenvalues}});
  }
  return arr.dump(2);
}

std::vector<FixtureRecord> fixtures_from_json(const std::string& text) {
  const auto arr = nlohmann::json::parse(text);
  std::vector<FixtureRecord> out;
  for (const auto& j : arr) {
    FixtureRecord r;
    r.spec = spec_from_json(j.at("spec"));
    r.m = j.at("m").get<int>();
    r.sigma = j.at("sigma").get<int>();
    r.grid.n = j.at("n").get<std::size_t>();
    r.grid.r_max = j.at("r_max").get<double>();
    r.eigenvalues = j.at("eigenvalues").get<std::vector<double>>();
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace soilab::oracle
