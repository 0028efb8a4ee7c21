#pragma once

#include <Eigen/Dense>
#include <array>
#include <complex>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace soilab::entangle {

using cplx = std::complex<double>;
using Vec2 = Eigen::Matrix<cplx, 2, 1>;
using Mat2 = Eigen::Matrix<cplx, 2, 2>;
using Vec4 = Eigen::Matrix<cplx, 4, 1>;
using Mat4 = Eigen::Matrix<cplx, 4, 4>;
using Vec16 = Eigen::Matrix<cplx, 16, 1>;

// Each photon lives in SAM (x) OAM with |m| = 2: slot = 2 sIdx + mIdx, sIdx = 0 for
// sigma = +1, mIdx = 0 for m = +2. Two photons: index 4 i1 + i2.

enum class OrbitalBasis { LG, HG, HGRotated };

struct OrbitalLabel {
  OrbitalBasis basis = OrbitalBasis::HG;
  double angle = 0.0;  // pattern rotation for HGRotated
};

const char* to_string(OrbitalBasis b);

struct TwoParticleState {
  Vec16 amplitudes = Vec16::Zero();
  std::array<OrbitalLabel, 2> labels{};

  double norm() const { return amplitudes.norm(); }
};

// Single-photon kets.
Vec2 sam_plus();
Vec2 sam_minus();
Vec2 sam_h();
Vec2 sam_d();
Vec2 sam_a();
/// |LG +-2>.
Vec2 lg(int sign);
/// Pattern cos(2(phi - alpha)): (e^{-2 i alpha}|+2> + e^{2 i alpha}|-2>) / sqrt 2.
Vec2 hg(double alpha);
Vec4 ket(const Vec2& sam, const Vec2& orbital);
/// Normalised |x1>|y1> - |x2>|y2>.
Vec16 antisymmetric(const Vec4& x1, const Vec4& y1, const Vec4& x2, const Vec4& y2);

enum class ConverterDirection { HGtoLG, LGtoHG };

struct LocalOperation {
  enum class Kind { SoiStage, WavePlate, ModeConverter };
  Kind kind = Kind::SoiStage;
  int arm = 1;
  double phase = 0.0;       // SoiStage: |db| z (negative for the inverse)
  double retardance = 0.0;  // WavePlate
  double axis = 0.0;        // WavePlate fast-axis angle
  ConverterDirection direction = ConverterDirection::HGtoLG;
  double hg_angle = 0.0;  // ModeConverter: orientation of the HG pattern it maps to |+2>

  static LocalOperation soi_stage(int arm, double phase);
  static LocalOperation wave_plate(int arm, double retardance, double axis);
  static LocalOperation mode_converter(int arm, ConverterDirection dir, double hg_angle);

  Mat4 matrix() const;
  LocalOperation inverse() const;
  std::string describe() const;
};

/// Retarder in the circular basis (e_+, e_-), e_+- = (x +- i y) / sqrt 2.
Mat2 wave_plate_matrix(double retardance, double axis);

TwoParticleState bell_polarization_state();
/// Throws BasisMismatch when a converter's input basis does not match the arm's label.
TwoParticleState apply(const LocalOperation& op, const TwoParticleState& state);
double fidelity(const TwoParticleState& a, const TwoParticleState& b);
double fidelity(const Vec16& a, const Vec16& b);
/// Amplitudes with the two particles exchanged.
Vec16 swap_particles(const Vec16& v);

/// Qubit order (S1, O1, S2, O2); `keep` lists the retained qubits.
Eigen::MatrixXcd reduced_density(const Vec16& v, const std::vector<int>& keep);
double entropy_bits(const Eigen::MatrixXcd& rho);

struct EntanglementMeasures {
  double particle = 0.0;  // photon 1 vs photon 2
  double sam1 = 0.0, oam1 = 0.0, sam2 = 0.0, oam2 = 0.0;
  double sam_pair = 0.0;  // (S1 S2) vs (O1 O2)
};
EntanglementMeasures measures(const Vec16& v);

struct Waypoints {
  Vec16 rotated_hg;  // |+ HG+>|- HG-> - |- HG->|+ HG+>, HG+- rotated by +-22.5 deg
  Vec16 da_lg;       // |D LG+2>|A LG-2> - |A LG-2>|D LG+2>
  Vec16 h_lg;        // |H LG+2>|H LG-2> - |H LG-2>|H LG+2>
};
Waypoints protocol_waypoints();

struct ProtocolStep {
  std::string label;
  std::optional<LocalOperation> op;
  TwoParticleState state;
  std::optional<int> waypoint;  // 1..3 when this step should match a waypoint
  std::optional<double> fidelity;
  EntanglementMeasures entropies;
};

struct SolvedSettings {
  double stage1_phase = 0.0;
  double plate_retardance = 0.0;
  double plate_axis = 0.0;
  double converter_angle = 0.0;
  double stage3_phase = 0.0;
};

struct ProtocolTrace {
  std::vector<ProtocolStep> steps;
  SolvedSettings settings;
  std::array<double, 3> waypoint_fidelities{};
  /// Waypoint-1 fidelity if stage 1 were run at exactly |db| z = 22.5 deg.
  double literal_stage1_fidelity = 0.0;
  double inverse_fidelity = 0.0;
  std::vector<ProtocolStep> inverse_steps;
};

constexpr double kWaypointThreshold = 1.0 - 1e-10;

/// Solves the free settings, runs the forward sequence and its inverse.
/// Throws ProtocolStepFailed (with the step index) if a waypoint is missed.
ProtocolTrace run_protocol();

nlohmann::json to_json(const ProtocolTrace& trace);

}  // namespace soilab::entangle
