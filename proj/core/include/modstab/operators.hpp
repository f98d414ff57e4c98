#pragma once

#include "modstab/spectral.hpp"
#include "modstab/wave.hpp"

namespace modstab {

/// Linearization about a traveling wave, discretized on exponential modes −N..N.
///
/// L = k(c − f′(φ) − K*), A₀ = ∂θL, A₀† = −L∂θ,
/// A₁ = c − f′(φ) − Ω′(nk), A₂ = (i/2)Ω″(nk).
class LinearizedOperators {
 public:
  explicit LinearizedOperators(const TravelingWave& wave);

  int N() const { return N_; }
  int dim() const { return 2 * N_ + 1; }
  double k() const { return k_; }
  double c() const { return c_; }

  /// Fourier coefficients of f′(φ) on modes −2N..2N (exact for polynomial f).
  const FourierSeries& fprime() const { return fprime_; }
  /// Matrix of multiplication by f′(φ) restricted to modes −N..N.
  const CMat& toeplitz() const { return toeplitz_; }

  /// c(nk), i·c′(nk), −c″(nk) at mode n. K2 at n = 0 is NaN for symbols not smooth at 0.
  cplx symbol_K(int n) const { return {sym_K_(n + N_), 0.0}; }
  cplx symbol_K1(int n) const { return {0.0, sym_K1_(n + N_)}; }
  cplx symbol_K2(int n) const { return {sym_K2_(n + N_), 0.0}; }
  double omega(int n) const { return om_(n + N_); }
  double omega1(int n) const { return om1_(n + N_); }
  /// Ω″(nk); NaN at n = 0 for symbols not smooth at 0.
  double omega2(int n) const { return om2_(n + N_); }

  CMat L() const;
  CMat A0() const;
  CMat A0_adjoint() const;
  CMat A1() const;
  /// Throws UnsupportedSymbol when Ω″(0) is needed but undefined.
  CMat A2() const;

  FourierSeries apply_L(const FourierSeries& u) const;
  FourierSeries apply_A0(const FourierSeries& u) const;
  FourierSeries apply_A0_adjoint(const FourierSeries& u) const;
  FourierSeries apply_A1(const FourierSeries& u) const;
  /// Skips modes where u vanishes, so Ω″(0) is only required when û₀ ≠ 0.
  FourierSeries apply_A2(const FourierSeries& u) const;
  /// Multiplication by f′(φ), truncated to modes −N..N.
  FourierSeries apply_fprime(const FourierSeries& u) const;
  FourierSeries apply_K(const FourierSeries& u) const;
  FourierSeries apply_K1(const FourierSeries& u) const;
  FourierSeries apply_K2(const FourierSeries& u) const;

 private:
  FourierSeries embed(const FourierSeries& u) const;

  int N_;
  double k_;
  double c_;
  FourierSeries fprime_;
  CMat toeplitz_;
  RVec sym_K_, sym_K1_, sym_K2_, om_, om1_, om2_;
};

/// Exact Fourier coefficients of f′(φ) on modes −L..L.
FourierSeries fprime_series(const TravelingWave& wave, int L);

}  // namespace modstab
