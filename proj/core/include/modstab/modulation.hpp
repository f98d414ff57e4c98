#pragma once

#include <array>
#include <string>

#include "modstab/kernel.hpp"

namespace modstab {

enum class Classification { StrictlyHyperbolic, WeaklyHyperbolic, Elliptic, Marginal };

const char* to_string(Classification c) noexcept;
/// Inverse of to_string; throws Parse on unknown names.
Classification classification_from_string(const std::string& s);

using Speeds = std::array<cplx, 3>;

struct ModulationMatrix {
  RMat D = RMat::Zero(3, 3);
  Speeds speeds{};
  Classification classification = Classification::Marginal;
  double tol = 1e-6;
};

namespace detail {
/// Switches for mutation tests of the d₃₁ assembly.
struct ModulationVariant {
  bool drop_half_kK2 = false;
};
}  // namespace detail

/// Quasilinear modulation matrix with rows −∂(kc), −⟨1, f′φ_• + K*φ_•⟩ and d₃•.
ModulationMatrix assemble_modulation_matrix(const TravelingWave& wave, const ParameterJacobian& pjac,
                                            double tol = 1e-6,
                                            const detail::ModulationVariant& variant = {});

/// Second row recomputed by trapezoid quadrature of f′(φ)φ_• on a padded grid.
std::array<double, 3> modulation_row2_quadrature(const TravelingWave& wave,
                                                 const ParameterJacobian& pjac);

/// Roots of the characteristic cubic of a real 3×3 matrix, sorted by (Re, Im).
Speeds characteristic_speeds(const RMat& D);

/// scale = 1 + max|μ|, thr = tol·scale. Elliptic if max|Im μ| > 10 thr, Marginal if it lies in
/// [thr/10, 10 thr], otherwise Strictly or Weakly hyperbolic by the smallest gap against thr.
Classification classify_hyperbolicity(const Speeds& speeds, double tol = 1e-6);

}  // namespace modstab
