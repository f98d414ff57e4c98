#pragma once

#include <vector>

#include "modstab/errors.hpp"
#include "modstab/spectral.hpp"
#include "modstab/symbols.hpp"

namespace modstab {

struct SolverOptions {
  int N = 64;
  /// Oversampling of the 2N+2 grid for f(φ); 0 picks max(2, deg f).
  int pad = 0;
  double tol_newton = 1e-11;
  double tol_derivs = 1e-8;
  double cond_max = 1e12;
  int max_iter = 25;
  /// Tail guard |a_N| ≤ decay_tol·max|aₙ|.
  double decay_tol = 1e-10;
  /// Smallest amplitude step continue_family will bisect down to.
  double min_step = 1e-6;
};

/// Even 2π-periodic profile φ(θ) = a₀ + Σ aₙ cos nθ solving −kcφ + kf(φ) + kK*φ = b.
struct TravelingWave {
  EquationSpec spec;
  double k = 1.0;
  double c = 0.0;
  double b = 0.0;
  int N = 0;
  RVec coeffs;
  bool degenerate = false;
  double M_target = 0.0;
  double P_target = 0.0;
  /// Residual norms per Newton iterate, the last one being the accepted state.
  std::vector<double> newton_history;

  double omega() const { return k * c; }
  double amplitude() const { return coeffs.size() > 1 ? coeffs(1) : 0.0; }
  /// φ on the 2N+2 collocation grid.
  std::vector<double> grid() const;
  FourierSeries series() const { return FourierSeries::from_cosine(coeffs, N); }
};

struct ConservedTriple {
  double M = 0.0;
  double P = 0.0;
  double H = 0.0;
};

struct ParameterJacobian {
  RVec phi_k, phi_M, phi_P;
  double c_k = 0.0, c_M = 0.0, c_P = 0.0;
  double b_k = 0.0, b_M = 0.0, b_P = 0.0;
};

struct ProfileResidual {
  std::vector<double> residual;
  double sup = 0.0;
  double M_error = 0.0;
  double P_error = 0.0;
};

/// Continuation gave up; the waves converged so far are kept.
class ContinuationStalled : public Error {
 public:
  ContinuationStalled(const std::string& message, std::vector<TravelingWave> partial)
      : Error(ErrorKind::ContinuationStalled, message), partial_(std::move(partial)) {}
  const std::vector<TravelingWave>& partial() const noexcept { return partial_; }

 private:
  std::vector<TravelingWave> partial_;
};

/// Residual of the profile equation on the 2N+2 collocation grid.
ProfileResidual profile_residual(const TravelingWave& wave);

/// Newton solve of the Galerkin system with M(φ) = M_target and P(φ) = P_target.
TravelingWave solve_wave(const EquationSpec& spec, double k, double M_target, double P_target,
                         const TravelingWave& seed, const SolverOptions& opts = {});

/// Same, fixing a₁ = amplitude instead of P. Used by continuation.
TravelingWave solve_wave_amplitude(const EquationSpec& spec, double k, double M_target,
                                   double amplitude, const TravelingWave& seed,
                                   const SolverOptions& opts = {});

/// Stokes seed φ = ū + a cos θ, c = f′(ū) + c(k).
TravelingWave stokes_seed(const EquationSpec& spec, double k, double u_bar, double amplitude,
                          int N);

/// Natural-parameter continuation in a₁ from the constant state ū.
std::vector<TravelingWave> continue_family(const EquationSpec& spec, double k, double u_bar,
                                           const std::vector<double>& amp_steps,
                                           const SolverOptions& opts = {});

ParameterJacobian parameter_derivatives(const TravelingWave& wave,
                                        const SolverOptions& opts = {});

ConservedTriple conserved_quantities(const TravelingWave& wave);
/// M and P by trapezoid quadrature on a padded grid instead of Parseval.
ConservedTriple conserved_quantities_quadrature(const TravelingWave& wave);

/// True when the last two steps of the history satisfy r' ≤ C r² or r' ≤ floor.
bool newton_quadratic(const std::vector<double>& history, double C = 1e4, double floor = 1e-12);

/// Padded grid size used for f(φ).
int nonlinear_grid_size(const EquationSpec& spec, int N, int pad = 0);

}  // namespace modstab
