#include "modstab/operators.hpp"

#include <cmath>
#include <limits>

namespace modstab {

FourierSeries fprime_series(const TravelingWave& wave, int L) {
  const int d = std::max(1, wave.spec.nonlinearity.degree());
  const int band = (d - 1) * wave.N;
  const int G = 2 * (band + L) + 2;
  const std::vector<double> phi = cosine_samples(wave.coeffs, G);
  std::vector<double> fp(phi.size());
  for (std::size_t j = 0; j < phi.size(); ++j) fp[j] = wave.spec.nonlinearity.eval(phi[j], 1);
  return FourierSeries::from_samples(fp, L);
}

LinearizedOperators::LinearizedOperators(const TravelingWave& wave)
    : N_(wave.N), k_(wave.k), c_(wave.c), fprime_(fprime_series(wave, 2 * wave.N)),
      toeplitz_(2 * wave.N + 1, 2 * wave.N + 1), sym_K_(2 * N_ + 1), sym_K1_(2 * N_ + 1),
      sym_K2_(2 * N_ + 1), om_(2 * N_ + 1), om1_(2 * N_ + 1), om2_(2 * N_ + 1) {
  require_assumption1(wave.spec);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (int n = -N_; n <= N_; ++n) {
    const int i = n + N_;
    const double q = n * k_;
    const bool singular = n == 0 && !wave.spec.dispersion.smooth_at_zero;
    sym_K_(i) = phase_speed(wave.spec, q, 0);
    sym_K1_(i) = phase_speed(wave.spec, q, 1);
    sym_K2_(i) = singular ? nan : -phase_speed(wave.spec, q, 2);
    const auto w = omega_all(wave.spec, q);
    om_(i) = w[0];
    om1_(i) = w[1];
    om2_(i) = singular ? nan : w[2];
  }
  for (int m = -N_; m <= N_; ++m) {
    for (int n = -N_; n <= N_; ++n) toeplitz_(m + N_, n + N_) = fprime_.coeff(m - n);
  }
}

CMat LinearizedOperators::L() const {
  CMat out = -k_ * toeplitz_;
  for (int n = -N_; n <= N_; ++n) out(n + N_, n + N_) += k_ * (c_ - sym_K_(n + N_));
  return out;
}

CMat LinearizedOperators::A0() const {
  CMat out = L();
  for (int m = -N_; m <= N_; ++m) out.row(m + N_) *= cplx(0.0, m);
  return out;
}

CMat LinearizedOperators::A0_adjoint() const {
  CMat out = L();
  for (int n = -N_; n <= N_; ++n) out.col(n + N_) *= cplx(0.0, -n);
  return out;
}

CMat LinearizedOperators::A1() const {
  CMat out = -toeplitz_;
  for (int n = -N_; n <= N_; ++n) out(n + N_, n + N_) += c_ - om1_(n + N_);
  return out;
}

CMat LinearizedOperators::A2() const {
  CMat out = CMat::Zero(dim(), dim());
  for (int n = -N_; n <= N_; ++n) {
    const double w2 = om2_(n + N_);
    if (std::isnan(w2)) {
      throw Error(ErrorKind::UnsupportedSymbol, "second-order Bloch term needs Omega''(0)");
    }
    out(n + N_, n + N_) = cplx(0.0, 0.5 * w2);
  }
  return out;
}

FourierSeries LinearizedOperators::embed(const FourierSeries& u) const {
  return u.bandwidth() == N_ ? u : u.resized(N_);
}

FourierSeries LinearizedOperators::apply_fprime(const FourierSeries& u) const {
  return FourierSeries(N_, toeplitz_ * embed(u).coeffs());
}

FourierSeries LinearizedOperators::apply_K(const FourierSeries& u) const {
  return embed(u).multiplied([this](int n) { return symbol_K(n); });
}

FourierSeries LinearizedOperators::apply_K1(const FourierSeries& u) const {
  return embed(u).multiplied([this](int n) { return symbol_K1(n); });
}

FourierSeries LinearizedOperators::apply_K2(const FourierSeries& u) const {
  const FourierSeries v = embed(u).multiplied([this](int n) { return symbol_K2(n); });
  if (std::isnan(std::abs(v.coeff(0)))) {
    throw Error(ErrorKind::UnsupportedSymbol, "K2 needs c''(0), undefined for this symbol");
  }
  return v;
}

FourierSeries LinearizedOperators::apply_L(const FourierSeries& u) const {
  const FourierSeries e = embed(u);
  FourierSeries out = apply_fprime(e);
  out *= -1.0;
  out += e.multiplied([this](int n) { return cplx(c_ - sym_K_(n + N_), 0.0); });
  out *= k_;
  return out;
}

FourierSeries LinearizedOperators::apply_A0(const FourierSeries& u) const {
  return apply_L(u).derivative();
}

FourierSeries LinearizedOperators::apply_A0_adjoint(const FourierSeries& u) const {
  FourierSeries out = apply_L(embed(u).derivative());
  out *= -1.0;
  return out;
}

FourierSeries LinearizedOperators::apply_A1(const FourierSeries& u) const {
  const FourierSeries e = embed(u);
  FourierSeries out = apply_fprime(e);
  out *= -1.0;
  out += e.multiplied([this](int n) { return cplx(c_ - om1_(n + N_), 0.0); });
  return out;
}

FourierSeries LinearizedOperators::apply_A2(const FourierSeries& u) const {
  const FourierSeries v = embed(u).multiplied([this](int n) { return cplx(0.0, 0.5 * om2_(n + N_)); });
  if (std::isnan(std::abs(v.coeff(0)))) {
    throw Error(ErrorKind::UnsupportedSymbol, "second-order Bloch term needs Omega''(0)");
  }
  return v;
}

}  // namespace modstab
