#include "soilab/entanglement.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <numbers>
#include <sstream>

#include "soilab/error.hpp"

namespace soilab::entangle {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kDeg = kPi / 180.0;
const cplx kI(0.0, 1.0);

Mat2 hadamard() {
  Mat2 h;
  h << 1, 1, 1, -1;
  return h / std::sqrt(2.0);
}

// Pattern rotation by beta on the (|+2>, |-2>) pair.
Mat2 orbital_rotation(double beta) {
  Mat2 r = Mat2::Zero();
  r(0, 0) = std::polar(1.0, -2.0 * beta);
  r(1, 1) = std::polar(1.0, 2.0 * beta);
  return r;
}

Mat4 sam_op(const Mat2& a) {
  Mat4 m = Mat4::Zero();
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) m.block<2, 2>(2 * i, 2 * j) = a(i, j) * Mat2::Identity();
  return m;
}

Mat4 orbital_op(const Mat2& b) {
  Mat4 m = Mat4::Zero();
  m.block<2, 2>(0, 0) = b;
  m.block<2, 2>(2, 2) = b;
  return m;
}

int bit_of(int qubit) { return 3 - qubit; }

std::string deg(double rad) {
  std::ostringstream os;
  os.precision(6);
  os << rad / kDeg << " deg";
  return os.str();
}

TwoParticleState apply_both(const TwoParticleState& s, LocalOperation op) {
  op.arm = 1;
  auto t = apply(op, s);
  op.arm = 2;
  return apply(op, t);
}

// Smallest phase k * 0.5 deg (k = 1 .. 720) taking `from` onto `target` with SOI stages in both arms.
std::optional<double> solve_soi_phase(const TwoParticleState& from, const Vec16& target) {
  for (int k = 1; k <= 720; ++k) {
    const double phase = 0.5 * k * kDeg;
    if (fidelity(apply_both(from, LocalOperation::soi_stage(1, phase)).amplitudes, target) >= kWaypointThreshold) {
      return phase;
    }
  }
  return std::nullopt;
}

[[noreturn]] void step_failed(int step, const std::string& what) {
  throw Error(ErrorCode::ProtocolStepFailed, "protocol step " + std::to_string(step) + ": " + what);
}

}  // namespace

const char* to_string(OrbitalBasis b) {
  switch (b) {
    case OrbitalBasis::LG: return "LG";
    case OrbitalBasis::HG: return "HG";
    case OrbitalBasis::HGRotated: return "HG_rotated";
  }
  return "?";
}

Vec2 sam_plus() { return Vec2(1.0, 0.0); }
Vec2 sam_minus() { return Vec2(0.0, 1.0); }
Vec2 sam_h() { return Vec2(1.0, 1.0) / std::sqrt(2.0); }
Vec2 sam_d() { return Vec2(cplx(0.5, -0.5), cplx(0.5, 0.5)); }
Vec2 sam_a() { return Vec2(cplx(0.5, 0.5), cplx(0.5, -0.5)); }
Vec2 lg(int sign) { return sign > 0 ? Vec2(1.0, 0.0) : Vec2(0.0, 1.0); }
Vec2 hg(double alpha) { return Vec2(std::polar(1.0, -2.0 * alpha), std::polar(1.0, 2.0 * alpha)) / std::sqrt(2.0); }

Vec4 ket(const Vec2& sam, const Vec2& orbital) {
  Vec4 v;
  for (int s = 0; s < 2; ++s)
    for (int m = 0; m < 2; ++m) v(2 * s + m) = sam(s) * orbital(m);
  return v;
}

Vec16 antisymmetric(const Vec4& x1, const Vec4& y1, const Vec4& x2, const Vec4& y2) {
  Vec16 v;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) v(4 * i + j) = x1(i) * y1(j) - x2(i) * y2(j);
  return v / v.norm();
}

Mat2 wave_plate_matrix(double retardance, double axis) {
  Eigen::Matrix2cd rot;
  const double c = std::cos(axis), s = std::sin(axis);
  rot << c, s, -s, c;
  Eigen::Matrix2cd ret = Eigen::Matrix2cd::Zero();
  ret(0, 0) = std::polar(1.0, -0.5 * retardance);
  ret(1, 1) = std::polar(1.0, 0.5 * retardance);
  const Eigen::Matrix2cd jones = rot.transpose() * ret * rot;
  Eigen::Matrix2cd t;  // columns e_+, e_- in Cartesian components
  t << 1, 1, kI, -kI;
  t /= std::sqrt(2.0);
  return t.adjoint() * jones * t;
}

LocalOperation LocalOperation::soi_stage(int arm, double phase) {
  LocalOperation op;
  op.kind = Kind::SoiStage;
  op.arm = arm;
  op.phase = phase;
  return op;
}

LocalOperation LocalOperation::wave_plate(int arm, double retardance, double axis) {
  LocalOperation op;
  op.kind = Kind::WavePlate;
  op.arm = arm;
  op.retardance = retardance;
  op.axis = axis;
  return op;
}

LocalOperation LocalOperation::mode_converter(int arm, ConverterDirection dir, double hg_angle) {
  LocalOperation op;
  op.kind = Kind::ModeConverter;
  op.arm = arm;
  op.direction = dir;
  op.hg_angle = hg_angle;
  return op;
}

Mat4 LocalOperation::matrix() const {
  switch (kind) {
    case Kind::SoiStage: {
      Mat4 m = Mat4::Zero();
      for (int s = 0; s < 2; ++s) {
        for (int k = 0; k < 2; ++k) {
          const double sigma_mu = (s == 0 ? 1.0 : -1.0) * (k == 0 ? 1.0 : -1.0);
          m(2 * s + k, 2 * s + k) = std::polar(1.0, -sigma_mu * phase);
        }
      }
      return m;
    }
    case Kind::WavePlate:
      return sam_op(wave_plate_matrix(retardance, axis));
    case Kind::ModeConverter: {
      const Mat2 to_lg = hadamard() * orbital_rotation(-hg_angle);
      return orbital_op(direction == ConverterDirection::HGtoLG ? to_lg : Mat2(to_lg.adjoint()));
    }
  }
  return Mat4::Identity();
}

LocalOperation LocalOperation::inverse() const {
  LocalOperation op = *this;
  switch (kind) {
    case Kind::SoiStage: op.phase = -phase; break;
    case Kind::WavePlate: op.retardance = -retardance; break;
    case Kind::ModeConverter:
      op.direction = direction == ConverterDirection::HGtoLG ? ConverterDirection::LGtoHG : ConverterDirection::HGtoLG;
      break;
  }
  return op;
}

std::string LocalOperation::describe() const {
  std::ostringstream os;
  os << "arm " << arm << ": ";
  switch (kind) {
    case Kind::SoiStage: os << "SOI stage |db|z = " << deg(phase); break;
    case Kind::WavePlate: os << "wave plate retardance " << deg(retardance) << ", axis " << deg(axis); break;
    case Kind::ModeConverter:
      os << "mode converter " << (direction == ConverterDirection::HGtoLG ? "HG->LG" : "LG->HG") << " at "
         << deg(hg_angle);
      break;
  }
  return os.str();
}

TwoParticleState bell_polarization_state() {
  TwoParticleState s;
  s.amplitudes = antisymmetric(ket(sam_plus(), hg(0)), ket(sam_minus(), hg(0)), ket(sam_minus(), hg(0)),
                               ket(sam_plus(), hg(0)));
  s.labels = {OrbitalLabel{OrbitalBasis::HG, 0.0}, OrbitalLabel{OrbitalBasis::HG, 0.0}};
  return s;
}

TwoParticleState apply(const LocalOperation& op, const TwoParticleState& state) {
  if (op.arm != 1 && op.arm != 2) throw Error(ErrorCode::InvalidArgument, "arm must be 1 or 2");
  TwoParticleState out = state;
  auto& label = out.labels[static_cast<std::size_t>(op.arm - 1)];
  if (op.kind == LocalOperation::Kind::ModeConverter) {
    const bool from_hg = op.direction == ConverterDirection::HGtoLG;
    if (from_hg == (label.basis == OrbitalBasis::LG)) {
      throw Error(ErrorCode::BasisMismatch, std::string("converter expects ") + (from_hg ? "an HG" : "an LG") +
                                                " input but arm " + std::to_string(op.arm) + " is labelled " +
                                                to_string(label.basis));
    }
    label = from_hg ? OrbitalLabel{OrbitalBasis::LG, 0.0}
                    : OrbitalLabel{op.hg_angle == 0.0 ? OrbitalBasis::HG : OrbitalBasis::HGRotated, op.hg_angle};
  } else if (op.kind == LocalOperation::Kind::SoiStage && label.basis != OrbitalBasis::LG) {
    label.angle += 0.5 * op.phase;
    label.basis = std::abs(label.angle) < 1e-15 ? OrbitalBasis::HG : OrbitalBasis::HGRotated;
  }
  const Mat4 u = op.matrix();
  Eigen::Map<const Eigen::Matrix<cplx, 4, 4, Eigen::RowMajor>> in(state.amplitudes.data());
  Eigen::Matrix<cplx, 4, 4, Eigen::RowMajor> res;
  // amplitudes(4 i1 + i2) = A(i1, i2): arm 1 acts on rows, arm 2 on columns.
  if (op.arm == 1) {
    res = u * in;
  } else {
    res = in * u.transpose();
  }
  out.amplitudes = Eigen::Map<const Vec16>(res.data());
  return out;
}

double fidelity(const Vec16& a, const Vec16& b) { return std::norm(a.dot(b)); }

double fidelity(const TwoParticleState& a, const TwoParticleState& b) { return fidelity(a.amplitudes, b.amplitudes); }

Vec16 swap_particles(const Vec16& v) {
  Vec16 out;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) out(4 * j + i) = v(4 * i + j);
  return out;
}

Eigen::MatrixXcd reduced_density(const Vec16& v, const std::vector<int>& keep) {
  const int k = static_cast<int>(keep.size());
  std::vector<int> traced;
  for (int q = 0; q < 4; ++q) {
    if (std::find(keep.begin(), keep.end(), q) == keep.end()) traced.push_back(q);
  }
  auto index = [&](int kept_bits, int traced_bits) {
    int idx = 0;
    for (int i = 0; i < k; ++i) {
      if ((kept_bits >> (k - 1 - i)) & 1) idx |= 1 << bit_of(keep[static_cast<std::size_t>(i)]);
    }
    const int t = static_cast<int>(traced.size());
    for (int i = 0; i < t; ++i) {
      if ((traced_bits >> (t - 1 - i)) & 1) idx |= 1 << bit_of(traced[static_cast<std::size_t>(i)]);
    }
    return idx;
  };
  const int dk = 1 << k;
  const int dt = 1 << static_cast<int>(traced.size());
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(dk, dk);
  for (int a = 0; a < dk; ++a)
    for (int b = 0; b < dk; ++b)
      for (int t = 0; t < dt; ++t) rho(a, b) += v(index(a, t)) * std::conj(v(index(b, t)));
  return rho;
}

double entropy_bits(const Eigen::MatrixXcd& rho) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho, Eigen::EigenvaluesOnly);
  double s = 0.0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    const double p = es.eigenvalues()(i);
    if (p > 1e-15) s -= p * std::log2(p);
  }
  return s;
}

EntanglementMeasures measures(const Vec16& v) {
  EntanglementMeasures m;
  m.particle = entropy_bits(reduced_density(v, {0, 1}));
  m.sam1 = entropy_bits(reduced_density(v, {0}));
  m.oam1 = entropy_bits(reduced_density(v, {1}));
  m.sam2 = entropy_bits(reduced_density(v, {2}));
  m.oam2 = entropy_bits(reduced_density(v, {3}));
  m.sam_pair = entropy_bits(reduced_density(v, {0, 2}));
  return m;
}

Waypoints protocol_waypoints() {
  const double r = 22.5 * kDeg;
  Waypoints w;
  w.rotated_hg = antisymmetric(ket(sam_plus(), hg(r)), ket(sam_minus(), hg(-r)), ket(sam_minus(), hg(-r)),
                               ket(sam_plus(), hg(r)));
  w.da_lg = antisymmetric(ket(sam_d(), lg(1)), ket(sam_a(), lg(-1)), ket(sam_a(), lg(-1)), ket(sam_d(), lg(1)));
  w.h_lg = antisymmetric(ket(sam_h(), lg(1)), ket(sam_h(), lg(-1)), ket(sam_h(), lg(-1)), ket(sam_h(), lg(1)));
  return w;
}

ProtocolTrace run_protocol() {
  const auto wp = protocol_waypoints();
  const auto bell = bell_polarization_state();
  ProtocolTrace trace;

  // Stage 1: SOI in both arms.
  const auto stage1 = solve_soi_phase(bell, wp.rotated_hg);
  if (!stage1) step_failed(2, "no SOI length reaches the rotated-HG waypoint");
  trace.settings.stage1_phase = *stage1;
  trace.literal_stage1_fidelity =
      fidelity(apply_both(bell, LocalOperation::soi_stage(1, 22.5 * kDeg)).amplitudes, wp.rotated_hg);
  const auto after1 = apply_both(bell, LocalOperation::soi_stage(1, *stage1));

  // Stage 2: same plate and converter in each arm, found by search.
  bool found = false;
  for (int c = 0; c <= 180 && !found; ++c) {
    const double conv = 0.5 * c * kDeg;
    for (double ret : {0.5 * kPi, kPi}) {
      for (int a = 0; a < 360 && !found; ++a) {
        const double axis = 0.5 * a * kDeg;
        auto s = after1;
        for (int arm : {1, 2}) {
          s = apply(LocalOperation::wave_plate(arm, ret, axis), s);
          s = apply(LocalOperation::mode_converter(arm, ConverterDirection::HGtoLG, conv), s);
        }
        if (fidelity(s.amplitudes, wp.da_lg) >= kWaypointThreshold) {
          trace.settings.plate_retardance = ret;
          trace.settings.plate_axis = axis;
          trace.settings.converter_angle = conv;
          found = true;
        }
      }
      if (found) break;
    }
  }
  if (!found) step_failed(6, "no wave plate / converter setting reaches the D/A-LG waypoint");

  auto s2 = after1;
  for (int arm : {1, 2}) {
    s2 = apply(LocalOperation::wave_plate(arm, trace.settings.plate_retardance, trace.settings.plate_axis), s2);
    s2 = apply(LocalOperation::mode_converter(arm, ConverterDirection::HGtoLG, trace.settings.converter_angle), s2);
  }
  const auto stage3 = solve_soi_phase(s2, wp.h_lg);
  if (!stage3) step_failed(8, "no SOI length reaches the H-LG waypoint");
  trace.settings.stage3_phase = *stage3;

  // Forward run, one local operation per step.
  const std::vector<std::pair<LocalOperation, std::optional<int>>> sequence = {
      {LocalOperation::soi_stage(1, *stage1), std::nullopt},
      {LocalOperation::soi_stage(2, *stage1), 1},
      {LocalOperation::wave_plate(1, trace.settings.plate_retardance, trace.settings.plate_axis), std::nullopt},
      {LocalOperation::mode_converter(1, ConverterDirection::HGtoLG, trace.settings.converter_angle), std::nullopt},
      {LocalOperation::wave_plate(2, trace.settings.plate_retardance, trace.settings.plate_axis), std::nullopt},
      {LocalOperation::mode_converter(2, ConverterDirection::HGtoLG, trace.settings.converter_angle), 2},
      {LocalOperation::soi_stage(1, *stage3), std::nullopt},
      {LocalOperation::soi_stage(2, *stage3), 3},
  };
  const Vec16* targets[] = {&wp.rotated_hg, &wp.da_lg, &wp.h_lg};

  ProtocolStep initial;
  initial.label = "initial Bell state";
  initial.state = bell;
  initial.entropies = measures(bell.amplitudes);
  trace.steps.push_back(initial);
  TwoParticleState cur = bell;
  for (const auto& [op, waypoint] : sequence) {
    cur = apply(op, cur);
    ProtocolStep st;
    st.label = op.describe();
    st.op = op;
    st.state = cur;
    st.entropies = measures(cur.amplitudes);
    if (waypoint) {
      st.waypoint = *waypoint;
      st.fidelity = fidelity(cur.amplitudes, *targets[*waypoint - 1]);
      trace.waypoint_fidelities[static_cast<std::size_t>(*waypoint - 1)] = *st.fidelity;
      if (*st.fidelity < kWaypointThreshold) {
        step_failed(static_cast<int>(trace.steps.size()), "waypoint " + std::to_string(*waypoint) + " fidelity " +
                                                              std::to_string(*st.fidelity));
      }
    }
    trace.steps.push_back(st);
  }

  // Inverse run from the final state.
  for (auto it = sequence.rbegin(); it != sequence.rend(); ++it) {
    const auto inv = it->first.inverse();
    cur = apply(inv, cur);
    ProtocolStep st;
    st.label = inv.describe();
    st.op = inv;
    st.state = cur;
    st.entropies = measures(cur.amplitudes);
    trace.inverse_steps.push_back(st);
  }
  trace.inverse_fidelity = fidelity(cur, bell);
  if (trace.inverse_fidelity < kWaypointThreshold) {
    step_failed(static_cast<int>(sequence.size() * 2), "inverse run does not restore the Bell state");
  }
  return trace;
}

namespace {

nlohmann::json op_json(const LocalOperation& op) {
  nlohmann::json j;
  j["arm"] = op.arm;
  switch (op.kind) {
    case LocalOperation::Kind::SoiStage:
      j["kind"] = "soi_stage";
      j["phase_rad"] = op.phase;
      break;
    case LocalOperation::Kind::WavePlate:
      j["kind"] = "wave_plate";
      j["retardance_rad"] = op.retardance;
      j["axis_rad"] = op.axis;
      break;
    case LocalOperation::Kind::ModeConverter:
      j["kind"] = "mode_converter";
      j["direction"] = op.direction == ConverterDirection::HGtoLG ? "HG->LG" : "LG->HG";
      j["hg_angle_rad"] = op.hg_angle;
      break;
  }
  return j;
}

nlohmann::json step_json(const ProtocolStep& st) {
  nlohmann::json j;
  j["label"] = st.label;
  if (st.op) j["operation"] = op_json(*st.op);
  std::vector<double> re(16), im(16);
  for (int i = 0; i < 16; ++i) {
    re[static_cast<std::size_t>(i)] = st.state.amplitudes(i).real();
    im[static_cast<std::size_t>(i)] = st.state.amplitudes(i).imag();
  }
  j["state"] = {{"re", re}, {"im", im}};
  j["norm"] = st.state.norm();
  j["orbital_labels"] = {to_string(st.state.labels[0].basis), to_string(st.state.labels[1].basis)};
  if (st.waypoint) {
    j["waypoint"] = *st.waypoint;
    j["fidelity"] = *st.fidelity;
  }
  const auto& e = st.entropies;
  j["entropy_bits"] = {{"particle", e.particle}, {"sam1", e.sam1}, {"oam1", e.oam1},
                       {"sam2", e.sam2},         {"oam2", e.oam2}, {"sam_pair_vs_oam_pair", e.sam_pair}};
  return j;
}

}  // namespace

nlohmann::json to_json(const ProtocolTrace& trace) {
  nlohmann::json j;
  j["basis"] = "index 4*i1 + i2, single-photon slot 2*s + m with s: sigma=+1,-1 and m: +2,-2";
  j["settings"] = {{"stage1_phase_rad", trace.settings.stage1_phase},
                   {"plate_retardance_rad", trace.settings.plate_retardance},
                   {"plate_axis_rad", trace.settings.plate_axis},
                   {"converter_hg_angle_rad", trace.settings.converter_angle},
                   {"stage3_phase_rad", trace.settings.stage3_phase}};
  j["waypoint_fidelities"] = trace.waypoint_fidelities;
  j["literal_22_5_deg_stage1_fidelity"] = trace.literal_stage1_fidelity;
  j["inverse_fidelity"] = trace.inverse_fidelity;
  j["steps"] = nlohmann::json::array();
  for (const auto& st : trace.steps) j["steps"].push_back(step_json(st));
  j["inverse_steps"] = nlohmann::json::array();
  for (const auto& st : trace.inverse_steps) j["inverse_steps"].push_back(step_json(st));
  return j;
}

}  // namespace soilab::entangle
