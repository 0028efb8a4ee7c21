#include "soilab/cli.hpp"

#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "soilab/core_types.hpp"
#include "soilab/entanglement.hpp"
#include "soilab/error.hpp"
#include "soilab/evolution.hpp"
#include "soilab/geometric_phase.hpp"
#include "soilab/kernels.hpp"
#include "soilab/mode_solver.hpp"
#include "soilab/parallel.hpp"
#include "soilab/soi_engine.hpp"
#include "soilab/spec_io.hpp"

namespace soilab::cli {
namespace {

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string item;
  std::istringstream is(text);
  while (std::getline(is, item, sep)) parts.push_back(trim(item));
  if (!text.empty() && text.back() == sep) parts.emplace_back();
  return parts;
}

int to_int(const std::string& s, const std::string& whole) {
  std::size_t used = 0;
  int v = 0;
  try {
    v = std::stoi(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (s.empty() || used != s.size()) throw Error(ErrorCode::InvalidArgument, "bad integer list '" + whole + "'");
  return v;
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

// One output table; cells are preformatted for CSV and typed for JSON.
struct Table {
  std::vector<std::string> columns;
  std::vector<ojson> rows;  // arrays, one entry per column; null = empty cell

  std::string csv() const {
    std::string s;
    for (std::size_t i = 0; i < columns.size(); ++i) s += (i ? "," : "") + columns[i];
    s += "\n";
    for (const auto& row : rows) {
      for (std::size_t i = 0; i < row.size(); ++i) {
        if (i) s += ",";
        const auto& c = row[i];
        if (c.is_null()) continue;
        if (c.is_number_float()) s += fmt(c.get<double>());
        else if (c.is_number()) s += std::to_string(c.get<long long>());
        else s += c.get<std::string>();
      }
      s += "\n";
    }
    return s;
  }

  std::string json() const {
    ojson arr = ojson::array();
    for (const auto& row : rows) {
      ojson obj = ojson::object();
      for (std::size_t i = 0; i < columns.size(); ++i) obj[columns[i]] = row[i];
      arr.push_back(std::move(obj));
    }
    return arr.dump(2) + "\n";
  }
};

ojson opt_num(const std::optional<double>& v) { return v ? ojson(*v) : ojson(nullptr); }

struct Options {
  std::string config_path;
  std::string out;
  std::string format;
  std::string particle = "photon";
  std::optional<double> v;
  std::optional<double> k_core;
  double a = 1.0;
  double delta = 0.01;
  std::string m;
  std::optional<int> sigma;
  std::string profile = "step";
  std::optional<double> z_max;
  int steps = 201;
  int p = 1;
  std::string superposition = "a";
  std::string variant = "spatial";
  std::string v_sweep = "10,20,40,80";
  bool v_sweep_given = false;
};

struct Output {
  std::string data;
  std::string format;
};

WaveguideSpec build_spec(const Options& o) {
  WaveguideSpec spec;
  spec.particle = ParticleKind(parse_particle(o.particle));
  spec.a = o.a;
  spec.delta = o.delta;
  spec.profile = parse_profile(o.profile);
  if (o.k_core) {
    spec.k_core = *o.k_core;
  } else {
    const double v = o.v.value_or(5.0);
    spec.k_core = (o.delta > 0.0 && o.a > 0.0) ? v / (o.a * std::sqrt(o.delta)) : v;
  }
  return spec;
}

// Config problems are collected and reported together before any computation.
std::vector<std::string> validate_common(const Options& o, const WaveguideSpec& spec, std::ostream& err) {
  std::vector<std::string> problems;
  const auto report = validate_spec(spec);
  problems.insert(problems.end(), report.violations.begin(), report.violations.end());
  for (const auto& w : report.warnings) err << "warning: " << w << "\n";
  if (o.v && !(*o.v > 0.0)) problems.push_back("V must be positive");
  if (o.steps < 2) problems.push_back("steps must be at least 2");
  if (o.p < 1) problems.push_back("p must be at least 1");
  if (o.z_max && !(*o.z_max > 0.0 && std::isfinite(*o.z_max))) problems.push_back("z-max must be positive");
  if (!o.out.empty()) {
    const fs::path parent = fs::absolute(fs::path(o.out)).parent_path();
    std::error_code ec;
    if (!fs::is_directory(parent, ec)) {
      problems.push_back("output directory '" + parent.string() + "' does not exist");
    } else if (::access(parent.c_str(), W_OK) != 0) {
      problems.push_back("output directory '" + parent.string() + "' is not writable");
    }
  }
  return problems;
}

Output emit(const Table& t, const std::string& format) {
  return format == "json" ? Output{t.json(), "json"} : Output{t.csv(), "csv"};
}

Output cmd_modes(const Options& o, const WaveguideSpec& spec, std::ostream& err) {
  const auto ms = parse_int_list(o.m.empty() ? "0..3" : o.m);
  std::vector<std::vector<GuidedMode>> found(ms.size());
  parallel_for(ms.size(), [&](std::size_t i) { found[i] = solve_modes(spec, std::abs(ms[i]), 1000); });

  Table t{{"m_abs", "p", "beta0_a", "kappa_a", "decay_cladding_a", "N_a"}, {}};
  for (std::size_t i = 0; i < ms.size(); ++i) {
    if (found[i].empty()) {
      err << "note: |m| = " << std::abs(ms[i]) << " is below cutoff at V = " << fmt(spec.v_number()) << "\n";
    }
    for (const auto& mode : found[i]) {
      t.rows.push_back(ojson::array({mode.m_abs, mode.p, mode.beta0 * spec.a, mode.kappa_a(), mode.decay_a(),
                                     mode.norm_N * spec.a}));
    }
  }
  return emit(t, o.format);
}

Output cmd_soi(const Options& o, const WaveguideSpec& spec, std::ostream& err) {
  const auto ms = parse_int_list(o.m.empty() ? "1,-1" : o.m);
  std::vector<int> sigmas = o.sigma ? std::vector<int>{*o.sigma} : std::vector<int>{1, -1};

  struct Job {
    int m_ell;
    int sigma;
    bool step_companion;
  };
  std::vector<Job> jobs;
  for (int s : sigmas) {
    for (int m : ms) {
      jobs.push_back({m, s, false});
      if (spec.profile.is_differentiable()) jobs.push_back({m, s, true});
    }
  }

  WaveguideSpec step_spec = spec;
  step_spec.profile = RadialProfile::step();

  // Modes are shared across sigma and sign of m, so solve each (|m|, profile) once.
  std::vector<int> abs_list;
  for (int m : ms) {
    if (std::find(abs_list.begin(), abs_list.end(), std::abs(m)) == abs_list.end()) abs_list.push_back(std::abs(m));
  }
  const bool smooth = spec.profile.is_differentiable();
  std::vector<std::optional<GuidedMode>> mode(abs_list.size()), step_mode(abs_list.size());
  parallel_for(abs_list.size() * (smooth ? 2 : 1), [&](std::size_t k) {
    const std::size_t i = k % abs_list.size();
    const bool companion = k >= abs_list.size();
    auto list = solve_modes(companion ? step_spec : spec, abs_list[i], o.p);
    if (static_cast<int>(list.size()) >= o.p) (companion ? step_mode : mode)[i] = list[o.p - 1];
  });
  auto index_of = [&](int m) {
    return static_cast<std::size_t>(std::find(abs_list.begin(), abs_list.end(), std::abs(m)) - abs_list.begin());
  };
  for (std::size_t i = 0; i < abs_list.size(); ++i) {
    if (!mode[i] || (smooth && !step_mode[i])) {
      err << "note: |m| = " << abs_list[i] << ", p = " << o.p << " is not guided at V = " << fmt(spec.v_number())
          << "; skipped\n";
    }
  }

  std::vector<std::optional<SoiCorrection>> corr(jobs.size());
  parallel_for(jobs.size(), [&](std::size_t j) {
    const auto& job = jobs[j];
    const std::size_t i = index_of(job.m_ell);
    if (!mode[i] || (smooth && !step_mode[i])) return;
    const QuantumNumbers qn(job.sigma, job.m_ell);
    corr[j] = job.step_companion ? delta_beta_step(step_spec, *step_mode[i], qn) : delta_beta(spec, *mode[i], qn);
  });

  Table t{{"V", "m_ell", "sigma", "beta0_a", "abs_delta_beta_a", "signed_delta_beta_a", "bracket_factor", "method"},
          {}};
  for (std::size_t j = 0; j < jobs.size(); ++j) {
    if (!corr[j]) continue;
    const auto& c = *corr[j];
    const QuantumNumbers qn(jobs[j].sigma, jobs[j].m_ell);
    t.rows.push_back(ojson::array({spec.v_number(), jobs[j].m_ell, jobs[j].sigma, c.beta0 * spec.a,
                                   c.delta_beta_abs * spec.a, c.signed_delta_beta(qn) * spec.a,
                                   opt_num(c.bracket_factor), to_string(c.method)}));
  }
  return emit(t, o.format);
}

Output cmd_evolve(const Options& o, const WaveguideSpec& spec, std::ostream&) {
  const auto ms = parse_int_list(o.m.empty() ? "1" : o.m);
  if (ms.size() != 1 || ms[0] == 0) throw Error(ErrorCode::InvalidArgument, "evolve needs a single nonzero --m");
  const int m_ell = ms[0];
  const int sigma = o.sigma.value_or(1);
  if (o.superposition != "a" && o.superposition != "b") {
    throw Error(ErrorCode::InvalidArgument, "superposition must be 'a' or 'b'");
  }
  if (o.variant != "spatial" && o.variant != "temporal") {
    throw Error(ErrorCode::InvalidArgument, "variant must be 'spatial' or 'temporal'");
  }

  const GuidedMode mode = solve_mode(spec, std::abs(m_ell), o.p);
  const QuantumNumbers qn(sigma, m_ell);
  const SoiCorrection corr = delta_beta(spec, mode, qn);
  const double z_max = o.z_max.value_or(std::numbers::pi / corr.delta_beta_abs);

  std::vector<double> phases(static_cast<std::size_t>(o.steps));
  const bool temporal = o.variant == "temporal";
  const double d_omega = temporal ? delta_omega(spec, mode, corr) : 0.0;
  const double t_max = temporal ? z_max * corr.delta_beta_abs / d_omega : 0.0;
  for (std::size_t i = 0; i < phases.size(); ++i) {
    const double f = static_cast<double>(i) / static_cast<double>(phases.size() - 1);
    phases[i] = temporal ? d_omega * (f * t_max) : corr.delta_beta_abs * (f * z_max);
  }

  const SpinOrbitState initial =
      o.superposition == "a" ? make_superposition_a(sigma, m_ell) : make_superposition_b(sigma, m_ell);
  const auto sweep = rotation_sweep(initial, spec.particle, phases);

  const bool electron = spec.particle.kind() == Particle::Electron;
  Table t{{temporal ? "t_delta_omega" : "z_delta_beta", electron ? "spin_azimuth" : "polarization_angle",
           "pattern_angle", "norm"},
          {}};
  for (const auto& pt : sweep) {
    t.rows.push_back(ojson::array({pt.phase, pt.polarization_angle, opt_num(pt.pattern_angle), pt.norm}));
  }
  return emit(t, o.format);
}

Output cmd_geo(const Options& o, const WaveguideSpec& spec, std::ostream&) {
  std::vector<double> vs;
  if (o.v_sweep_given || !o.v) vs = parse_double_list(o.v_sweep);
  else vs = {*o.v};
  WaveguideSpec base = spec;
  base.profile = RadialProfile::step();
  const auto rows = compare_geo_vs_perturbative(base, vs);
  Table t{{"V", "m_ell_max", "theta_mode", "bracket_factor", "delta_beta_step_a", "delta_beta_geo_a", "ratio",
           "particle"},
          {}};
  for (const auto& r : rows) {
    t.rows.push_back(ojson::array({r.v, r.m_ell_max, r.theta_mode, r.bracket_factor, r.delta_beta_step,
                                   r.delta_beta_geo, r.ratio, to_string(r.particle)}));
  }
  return emit(t, o.format);
}

Output cmd_bell(const Options&, std::ostream& err) {
  const auto trace = entangle::run_protocol();
  err << "waypoint fidelities: " << fmt(trace.waypoint_fidelities[0]) << " " << fmt(trace.waypoint_fidelities[1])
      << " " << fmt(trace.waypoint_fidelities[2]) << "; inverse " << fmt(trace.inverse_fidelity) << "\n";
  return {entangle::to_json(trace).dump(2) + "\n", "json"};
}

std::string utc_now() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// Write to a sibling temp file, then rename over the target.
void write_atomic(const fs::path& path, const std::string& data) {
  const fs::path tmp = path.string() + ".tmp." + std::to_string(::getpid());
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw Error(ErrorCode::InvalidArgument, "cannot open '" + tmp.string() + "' for writing");
    f << data;
    f.flush();
    if (!f) {
      f.close();
      fs::remove(tmp);
      throw Error(ErrorCode::InvalidArgument, "write to '" + tmp.string() + "' failed");
    }
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp);
    throw Error(ErrorCode::InvalidArgument, "cannot rename onto '" + path.string() + "': " + ec.message());
  }
}

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::NumericalFailure:
    case ErrorCode::QuadratureNotConverged:
    case ErrorCode::ProtocolStepFailed:
      return kNumericalFailure;
    default:
      return kConfigError;
  }
}

}  // namespace

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  for (const auto& part : split(text, ',')) {
    if (part.empty()) throw Error(ErrorCode::InvalidArgument, "bad integer list '" + text + "'");
    const auto dots = part.find("..", 1);
    if (dots == std::string::npos) {
      out.push_back(to_int(part, text));
      continue;
    }
    const int lo = to_int(trim(part.substr(0, dots)), text);
    const int hi = to_int(trim(part.substr(dots + 2)), text);
    if (hi < lo) throw Error(ErrorCode::InvalidArgument, "descending range '" + part + "'");
    for (int m = lo; m <= hi; ++m) out.push_back(m);
  }
  if (out.empty()) throw Error(ErrorCode::InvalidArgument, "empty integer list");
  return out;
}

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> out;
  for (const auto& part : split(text, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(part, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (part.empty() || used != part.size()) throw Error(ErrorCode::InvalidArgument, "bad number list '" + text + "'");
    out.push_back(v);
  }
  if (out.empty()) throw Error(ErrorCode::InvalidArgument, "empty number list");
  return out;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Spin-orbit interaction in cylindrical waveguides", args.empty() ? "soilab" : args[0]};
  app.require_subcommand(1);
  app.set_config("--config", "", "key = value file; keys are the long flag names")->check(CLI::ExistingFile);

  Options o;
  app.add_option("--out", o.out, "data file (stdout when absent)");
  app.add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--particle", o.particle, "electron or photon")->check(CLI::IsMember({"electron", "photon"}));
  auto* v_opt = app.add_option("--V", o.v, "V number (default 5)");
  app.add_option("--k-core", o.k_core, "core wavenumber in units of 1/a")->excludes(v_opt);
  app.add_option("--a", o.a, "core radius");
  app.add_option("--delta", o.delta, "relative index / potential step");
  app.add_option("--m", o.m, "m_ell: integer, list a,b or range a..b");
  app.add_option("--sigma", o.sigma, "+1 or -1")->check(CLI::IsMember({-1, 1}));
  app.add_option("--profile", o.profile, "step or smooth:W");
  app.add_option("--z-max", o.z_max, "sweep length (default one beat period)");
  app.add_option("--steps", o.steps, "sweep points");
  app.add_option("--p", o.p, "radial index");
  app.add_option("--superposition", o.superposition, "a (SAM balanced) or b (OAM balanced)");
  app.add_option("--variant", o.variant, "spatial or temporal");
  auto* sweep_opt = app.add_option("--V-sweep", o.v_sweep, "comma list of V values for geo");

  auto* modes = app.add_subcommand("modes", "guided mode table")->fallthrough();
  auto* soi = app.add_subcommand("soi", "first-order spin-orbit shifts")->fallthrough();
  auto* evolve = app.add_subcommand("evolve", "rotation sweep")->fallthrough();
  auto* geo = app.add_subcommand("geo", "geometric vs perturbative table")->fallthrough();
  auto* bell = app.add_subcommand("bell", "entanglement transfer protocol")->fallthrough();

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kConfigError;
  }
  o.v_sweep_given = sweep_opt->count() > 0;
  o.config_path = app.get_config_ptr()->count() ? app.get_config_ptr()->as<std::string>() : "";

  const std::string command = app.get_subcommands().front()->get_name();
  if (o.format.empty()) o.format = command == "bell" ? "json" : "csv";

  const std::string started = utc_now();
  Output result;
  try {
    if (command == "bell" && o.format != "json") {
      err << "error: bell emits a JSON trace only\n";
      return kConfigError;
    }
    WaveguideSpec spec;
    try {
      spec = build_spec(o);
    } catch (const Error& e) {
      err << "error: " << e.what() << "\n";
      return kConfigError;
    }
    const auto problems = validate_common(o, spec, err);
    if (!problems.empty()) {
      err << "invalid configuration:\n";
      for (const auto& p : problems) err << "  - " << p << "\n";
      return kConfigError;
    }

    if (modes->parsed()) result = cmd_modes(o, spec, err);
    else if (soi->parsed()) result = cmd_soi(o, spec, err);
    else if (evolve->parsed()) result = cmd_evolve(o, spec, err);
    else if (geo->parsed()) result = cmd_geo(o, spec, err);
    else if (bell->parsed()) result = cmd_bell(o, err);

    if (o.out.empty()) {
      out << result.data;
      return kOk;
    }
    write_atomic(o.out, result.data);

    ojson meta;
    meta["command"] = command;
    meta["args"] = std::vector<std::string>(args.begin() + 1, args.end());
    meta["config"] = o.config_path.empty() ? ojson(nullptr) : ojson(o.config_path);
    meta["data_file"] = o.out;
    meta["format"] = result.format;
    meta["spec"] = to_json(spec);
    meta["isa"] = kernels::to_string(kernels::active().isa);
    meta["threads"] = worker_count();
    meta["started_utc"] = started;
    meta["finished_utc"] = utc_now();
    write_atomic(o.out + ".meta.json", meta.dump(2) + "\n");
    return kOk;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kNumericalFailure;
  }
}

}  // namespace soilab::cli
