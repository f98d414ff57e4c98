#pragma once

#include <array>
#include <complex>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace modstab {

/// Below this |q| the phase speed c(q) = Ω(q)/q and its derivatives come from
/// the even Taylor series about q = 0.
inline constexpr double kPhaseSeriesThreshold = 1e-3;

/// Coefficients of c(q) = c0 + c2 q² + c4 q⁴ + O(q⁶).
struct ZeroSeries {
  double c0 = 0.0;
  double c2 = 0.0;
  double c4 = 0.0;
};

/// Polynomial nonlinearity f(u) = Σ coeffs[j] u^j.
class Nonlinearity {
 public:
  Nonlinearity() = default;
  Nonlinearity(std::string name, std::vector<double> coeffs);

  /// f(u) = u²/2.
  static Nonlinearity quadratic();
  /// f(u) = u³/3.
  static Nonlinearity cubic();
  /// f(u) = u^p / p, integer p ≥ 2.
  static Nonlinearity power(int p);
  static Nonlinearity polynomial(std::vector<double> coeffs);

  const std::string& name() const { return name_; }
  const std::vector<double>& coeffs() const { return coeffs_; }
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }

  /// d^order f / du^order at u, order ∈ {0,1,2}.
  double eval(double u, int order) const;
  /// F with F' = f and F(0) = 0.
  double antiderivative(double u) const;

 private:
  std::string name_ = "quadratic";
  std::vector<double> coeffs_ = {0.0, 0.0, 0.5};
};

/// Dispersion relation Ω and the flags the catalogue records for it.
struct Dispersion {
  /// Ω and its first three derivatives for q ≥ 0. The odd extension to q < 0
  /// is applied by omega_eval.
  std::function<std::array<double, 4>(double)> omega_nonneg;
  ZeroSeries zero_series;
  bool smooth_at_zero = true;
  bool assumption1 = true;
  std::string formula;
};

/// Immutable description of one generalized Whitham equation
/// u_t + f(u)_x + K*u_x = 0 with K̂(q) = c(q) = Ω(q)/q.
struct EquationSpec {
  std::string name;
  std::map<std::string, double> params;
  /// Odd-power coefficients of Ω for custom symbols (index = power); empty otherwise.
  std::vector<double> omega_poly;
  Dispersion dispersion;
  Nonlinearity nonlinearity;
};

struct CatalogueEntry {
  std::string name;
  std::string formula;
  std::vector<std::string> param_names;
  bool assumption1;
  bool smooth_at_zero;
};

enum class MultiplierKind { K, K1, K2 };

/// All built-in dispersion symbols.
std::vector<CatalogueEntry> catalogue();

/// Builds a catalogue equation. Unknown names or parameters throw InvalidArgument.
EquationSpec make_equation(std::string_view name,
                           const std::map<std::string, double>& params = {},
                           Nonlinearity nonlinearity = Nonlinearity::quadratic());

/// Custom Ω(q) = Σ coeffs[j] q^j; only odd powers may be nonzero.
EquationSpec custom_equation(std::vector<double> omega_poly,
                             Nonlinearity nonlinearity = Nonlinearity::quadratic());

/// d^order Ω / dq^order, order ∈ {0,1,2,3}.
double omega_eval(const EquationSpec& spec, double q, int order);

/// Ω, Ω', Ω'', Ω''' at q in one call.
std::array<double, 4> omega_all(const EquationSpec& spec, double q);

/// c(q) = Ω(q)/q and its derivatives, order ∈ {0,1,2}. Safe at q = 0.
double phase_speed(const EquationSpec& spec, double q, int order);

/// (c, c', c'') at q.
std::array<double, 3> phase_speed_all(const EquationSpec& spec, double q);

/// Fourier symbol at θ-mode n of the θ-scale convolution with K, ξK or ξ²K:
/// c(nk), i·c'(nk) and −c''(nk) respectively.
std::complex<double> theta_multiplier(const EquationSpec& spec, double k, int n,
                                      MultiplierKind kind);

/// Pointwise f, f' or f'' over a grid.
std::vector<double> nonlinearity_eval(const EquationSpec& spec, std::span<const double> u,
                                      int order);

/// Throws AssumptionViolated when the symbol is not a real odd Ω.
void require_assumption1(const EquationSpec& spec);

namespace detail {
/// Series branch of phase_speed, exposed for testing the matching at the threshold.
std::array<double, 3> phase_speed_series(const EquationSpec& spec, double q);
/// Quotient branch c = Ω/q, c' = (Ω' − c)/q, c'' = (Ω'' − 2c')/q.
std::array<double, 3> phase_speed_direct(const EquationSpec& spec, double q);
}  // namespace detail

}  // namespace modstab
