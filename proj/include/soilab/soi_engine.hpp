#pragma once

#include <optional>

#include "soilab/core_types.hpp"
#include "soilab/mode_solver.hpp"

namespace soilab {

enum class SoiMethod { QuadratureGeneral, StepClosedForm };

const char* to_string(SoiMethod m);

/// First-order spin-orbit shift of the propagation constant for one |m| family.
struct SoiCorrection {
  double delta_beta_abs = 0.0;  // |delta beta|, 1/length
  int m_abs = 0;
  double beta0 = 0.0;
  SoiMethod method = SoiMethod::StepClosedForm;
  std::optional<double> bracket_factor;  // pi a^2 N^2 J_|m|(kappa a)^2, closed form only

  /// -sigma mu |delta beta|; zero for m_ell = 0.
  double signed_delta_beta(const QuantumNumbers& qn) const;
};

/// |delta beta| = |m| (pi Delta / 2 beta0) N^2 int chi'(rho) psi(rho)^2 d rho by adaptive
/// Gauss-Kronrod, subdivided around the steep part of chi. Needs a differentiable profile.
SoiCorrection delta_beta_quadrature(const WaveguideSpec& spec, const GuidedMode& mode, const QuantumNumbers& qn);

/// Closed form for the step profile, where chi' is a delta function at rho = a.
SoiCorrection delta_beta_step(const WaveguideSpec& spec, const GuidedMode& mode, const QuantumNumbers& qn);

/// Picks the closed form for step profiles and quadrature otherwise.
SoiCorrection delta_beta(const WaveguideSpec& spec, const GuidedMode& mode, const QuantumNumbers& qn);

/// Phase exponent -sigma mu |delta beta| z accumulated over z >= 0.
double soi_phase(const SoiCorrection& corr, const QuantumNumbers& qn, double z);

/// Frequency splitting at fixed beta: |delta omega| = |delta beta| v_g.
double delta_omega(const WaveguideSpec& spec, const GuidedMode& mode, const SoiCorrection& corr);

}  // namespace soilab
