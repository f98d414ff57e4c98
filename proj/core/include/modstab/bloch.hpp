#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "modstab/modulation.hpp"

namespace modstab {

enum class BlochForm { Exact, Taylor2 };

namespace detail {
/// Mutation switch: the second-order symbol written as (i/2)·nk·c″(nk).
struct BlochVariant {
  bool literal_A2 = false;
};
}  // namespace detail

/// Bloch operator A_τ on modes −N..N.
struct BlochOperator {
  double tau = 0.0;
  int N = 0;
  double k = 1.0;
  BlochForm form = BlochForm::Exact;
  CMat matrix;
};

struct EigenPair {
  cplx value;
  CVec vector;
};

struct DhatMatrix {
  CMat Dhat = CMat::Zero(3, 3);
  double imag_residue = 0.0;
  Speeds eigs{};
  /// Columns are eigenvectors matching eigs.
  CMat eigvecs = CMat::Zero(3, 3);
};

struct ConnectionReport {
  RMat D = RMat::Zero(3, 3);
  RMat Dhat_minus_c = RMat::Zero(3, 3);
  /// |D − (D̂₀ − cI)| entrywise.
  RMat entry_errors = RMat::Zero(3, 3);
  /// max entry error divided by max|D|.
  double max_entry_error = 0.0;
  int worst_row = 0;
  int worst_col = 0;
  double tol = 1e-6;
  bool pass = false;
};

struct BranchSlopes {
  std::vector<double> tau;
  /// λ_j(τ) matched to the eigenvectors of D̂₀.
  std::vector<Speeds> lambdas;
  /// s_j(τ) = λ_j(τ)/(ikτ).
  std::vector<Speeds> slopes;
  Speeds extrapolated{};
  Speeds reference{};
  /// max_j |s_j(τ) − eig_j(D̂₀)| per τ.
  std::vector<double> errors;
  double extrapolated_error = 0.0;
  /// Smallest observed order of the per-τ error between consecutive τ.
  double observed_order = 0.0;
  bool ambiguous = false;
};

struct SymmetryReport {
  double tau = 0.0;
  double norm = 0.0;
  /// Hausdorff distance between σ(A_τ) and −conj σ(A_τ).
  double hamiltonian_distance = 0.0;
  /// Hausdorff distance between σ(A_−τ) and conj σ(A_τ).
  double conjugate_distance = 0.0;
  double tol = 1e-8;
  bool pass = false;
};

struct MultiplicityReport {
  double norm_A0 = 0.0;
  /// Eigenvalues of A₀ with |λ| ≤ 1e−8‖A₀‖.
  int near_zero_eigs = 0;
  /// Numerical null dimensions of row-equilibrated A₀ and A₀².
  int null_dim_A0 = 0;
  int null_dim_A0_squared = 0;
  /// Rank of ⟨Ψ_j, v⟩ over a basis v of the null space of A₀².
  int gram_rank = 0;
};

enum class Consistency { Consistent, Inconsistent, Indeterminate };
const char* to_string(Consistency c) noexcept;

struct VerdictOptions {
  /// Empty selects adaptive_tau_list.
  std::vector<double> tau_list = {1e-2, 5e-3, 2.5e-3, 1.25e-3};
  double tol = 1e-6;
};

struct Verdict {
  Classification classification = Classification::Marginal;
  Speeds speeds{};
  /// max over τ and branches of Re λ_j(τ).
  double spectral_max_growth = 0.0;
  /// max over branches of |Re λ_j(τ)| per τ.
  std::vector<double> growth;
  /// Fitted C in |Re λ| ≤ Cτ².
  double growth_constant = 0.0;
  Consistency consistent = Consistency::Indeterminate;
  BranchSlopes slopes;
};

BlochOperator assemble_bloch(const TravelingWave& wave, double tau, BlochForm form,
                             const detail::BlochVariant& variant = {});

/// max entry of |Exact(τ) − Taylor2(τ)|.
double taylor_remainder(const TravelingWave& wave, double tau,
                        const detail::BlochVariant& variant = {});

/// Eigenpairs with |λ| ≤ radius sorted by modulus, at most max_count of them; radius < 0
/// selects 10·k·|τ|·(1+|c|). Eigenvalues come from an extended-precision shift-invert solve
/// when A_τ is invertible, eigenvectors from inverse iteration.
std::vector<EigenPair> spectrum_near_origin(const BlochOperator& op, double radius = -1.0,
                                            double c = 0.0, std::size_t max_count = SIZE_MAX);

/// τ_max·{1, 1/2, 1/4, 1/8} with τ_max = clamp(0.25·gap/(k(1 + |Ω″(k)|)), 1e-4, 1e-2), gap the
/// smallest distance between eigenvalues of D̂₀.
std::vector<double> adaptive_tau_list(const TravelingWave& wave, const DhatMatrix& dhat);

/// All eigenvalues by a direct dense solve.
std::vector<cplx> full_spectrum(const BlochOperator& op);

DhatMatrix assemble_dhat0(const TravelingWave& wave, const ParameterJacobian& pjac,
                          const KernelBases& bases, const detail::BlochVariant& variant = {});

ConnectionReport verify_connection(const TravelingWave& wave, const ParameterJacobian& pjac,
                                   const KernelBases& bases, double tol = 1e-6,
                                   const detail::ModulationVariant& mvariant = {},
                                   const detail::BlochVariant& bvariant = {});

/// An empty tau_list selects adaptive_tau_list.
BranchSlopes branch_slopes(const TravelingWave& wave, const ParameterJacobian& pjac,
                           const KernelBases& bases, const std::vector<double>& tau_list);

SymmetryReport symmetry_check(const TravelingWave& wave, double tau, double tol = 1e-8);

MultiplicityReport kernel_multiplicity(const TravelingWave& wave, const KernelBases& bases);

Verdict modulational_verdict(const TravelingWave& wave, const ParameterJacobian& pjac,
                             const KernelBases& bases, const VerdictOptions& opts = {});

/// Hausdorff distance between two finite point sets in ℂ.
double hausdorff_distance(const std::vector<cplx>& a, const std::vector<cplx>& b);

}  // namespace modstab
