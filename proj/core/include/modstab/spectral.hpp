#pragma once

#include <complex>
#include <functional>
#include <vector>

#include <Eigen/Dense>

namespace modstab {

using cplx = std::complex<double>;
using RVec = Eigen::VectorXd;
using CVec = Eigen::VectorXcd;
using RMat = Eigen::MatrixXd;
using CMat = Eigen::MatrixXcd;

/// Equispaced nodes θ_j = 2πj/G on [0, 2π).
std::vector<double> theta_grid(int G);

/// 2π-periodic function stored as exponential Fourier coefficients on modes −L..L.
/// Entry n + L of coeffs() is the coefficient of e^{inθ}.
class FourierSeries {
 public:
  FourierSeries() = default;
  explicit FourierSeries(int L);
  FourierSeries(int L, CVec coeffs);

  /// a₀ + Σ aₙ cos nθ, embedded in modes −L..L (L ≥ a.size() − 1, or −1 for a.size() − 1).
  static FourierSeries from_cosine(const RVec& a, int L = -1);
  /// Trapezoid projection of grid samples on theta_grid(values.size()) onto modes −L..L.
  static FourierSeries from_samples(const std::vector<double>& values, int L);

  int bandwidth() const { return L_; }
  const CVec& coeffs() const { return c_; }
  CVec& coeffs() { return c_; }
  cplx coeff(int n) const { return (n < -L_ || n > L_) ? cplx{} : c_(n + L_); }

  /// Copy truncated or zero-padded to modes −L..L.
  FourierSeries resized(int L) const;
  /// Cosine coefficients a₀..a_L of the even part.
  RVec cosine_coeffs() const;

  FourierSeries derivative() const;
  /// Antiderivative with the zero mode discarded and the constant chosen so the value at θ = 0 is 0.
  FourierSeries antiderivative() const;
  /// Multiplies mode n by symbol(n).
  FourierSeries multiplied(const std::function<cplx(int)>& symbol) const;

  cplx eval(double theta) const;
  std::vector<double> samples(int G) const;
  double sup_norm(int G) const;

  FourierSeries& operator+=(const FourierSeries& o);
  FourierSeries& operator-=(const FourierSeries& o);
  FourierSeries& operator*=(cplx s);

 private:
  int L_ = 0;
  CVec c_ = CVec::Zero(1);
};

FourierSeries operator+(FourierSeries a, const FourierSeries& b);
FourierSeries operator-(FourierSeries a, const FourierSeries& b);
FourierSeries operator*(cplx s, FourierSeries a);

/// Exact pointwise product (bandwidth La + Lb).
FourierSeries product(const FourierSeries& a, const FourierSeries& b);

/// ⟨f,g⟩ = ∫₀^{2π} conj(f) g dθ = 2π Σ conj(f̂ₙ) ĝₙ.
cplx inner(const FourierSeries& f, const FourierSeries& g);

/// Cosine coefficients 0..N of grid samples: (wₙ/G) Σ v_j cos(nθ_j), w₀ = 1, wₙ = 2.
RVec cosine_projection(const std::vector<double>& values, int N);

/// Cosine series evaluated on theta_grid(G).
std::vector<double> cosine_samples(const RVec& a, int G);

}  // namespace modstab
