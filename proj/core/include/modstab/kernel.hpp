#pragma once

#include <array>
#include <map>
#include <string>

#include "modstab/operators.hpp"

namespace modstab {

/// Bases of the generalized kernels of A₀ and A₀†:
/// Φ = (φ′, φ_M, φ_P), Ψ = (−∫₀^θ φ_P, 1, φ).
struct KernelBases {
  std::array<FourierSeries, 3> Phi;
  std::array<FourierSeries, 3> Psi;
  /// ⟨Ψ_j, Φ_ℓ⟩ (real part).
  RMat gram;
  /// max |Im ⟨Ψ_j, Φ_ℓ⟩|.
  double gram_imag = 0.0;
  /// |Ψ₁(2π) − Ψ₁(0)| implied by the mean of φ_P.
  double psi1_mismatch = 0.0;
};

struct KernelReport {
  /// Identity name → sup-norm residual on the collocation grid.
  std::map<std::string, double> residuals;
  double b_P = 0.0;
  double kc_M = 0.0;
  double c_P = 0.0;
  /// "b_P = k c_M", "c_P = 0", "both" or "neither" at tolerance 1e-8·scale.
  std::string degeneracy_branch;
  double max_residual() const;
};

struct SimpleKernelCheck {
  double sigma_min = 0.0;
  double sigma_next = 0.0;
  double norm = 0.0;
  /// |cos| of the angle between the null vector and φ′.
  double alignment = 0.0;
  /// c_M b_P − c_P b_M.
  double cb_bracket = 0.0;
  bool pass = false;
};

KernelBases build_bases(const TravelingWave& wave, const ParameterJacobian& pjac);

KernelReport verify_kernel_identities(const TravelingWave& wave, const ParameterJacobian& pjac,
                                      const KernelBases& bases);

/// Two smallest singular values of L[φ]W⁻¹, W = diag(1 + |c| + |c(nk)|), relative to its norm.
SimpleKernelCheck check_simple_kernel(const TravelingWave& wave, const ParameterJacobian& pjac,
                                      double tol_null = 1e-8, double tol_gap = 1e-4);

}  // namespace modstab
