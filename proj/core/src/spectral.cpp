#include "modstab/spectral.hpp"

#include <cmath>
#include <numbers>

#include "modstab/errors.hpp"

namespace modstab {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

std::vector<double> theta_grid(int G) {
  if (G <= 0) throw Error(ErrorKind::InvalidArgument, "grid size must be positive");
  std::vector<double> t(static_cast<std::size_t>(G));
  for (int j = 0; j < G; ++j) t[static_cast<std::size_t>(j)] = kTwoPi * j / G;
  return t;
}

FourierSeries::FourierSeries(int L) : L_(L), c_(CVec::Zero(2 * L + 1)) {
  if (L < 0) throw Error(ErrorKind::InvalidArgument, "bandwidth must be non-negative");
}

FourierSeries::FourierSeries(int L, CVec coeffs) : L_(L), c_(std::move(coeffs)) {
  if (L < 0 || c_.size() != 2 * L + 1) {
    throw Error(ErrorKind::InvalidArgument, "coefficient vector does not match bandwidth");
  }
}

FourierSeries FourierSeries::from_cosine(const RVec& a, int L) {
  const int n_max = static_cast<int>(a.size()) - 1;
  if (L < 0) L = n_max;
  FourierSeries f(L);
  for (int n = 0; n <= std::min(n_max, L); ++n) {
    if (n == 0) {
      f.c_(L) = a(0);
    } else {
      f.c_(L + n) = 0.5 * a(n);
      f.c_(L - n) = 0.5 * a(n);
    }
  }
  return f;
}

FourierSeries FourierSeries::from_samples(const std::vector<double>& values, int L) {
  const int G = static_cast<int>(values.size());
  if (G < 2 * L + 1) throw Error(ErrorKind::InvalidArgument, "grid too coarse for bandwidth");
  FourierSeries f(L);
  for (int n = -L; n <= L; ++n) {
    cplx acc{};
    for (int j = 0; j < G; ++j) {
      const double t = kTwoPi * static_cast<double>((static_cast<long>(n) * j) % G) / G;
      acc += values[static_cast<std::size_t>(j)] * cplx(std::cos(t), -std::sin(t));
    }
    f.c_(n + L) = acc / static_cast<double>(G);
  }
  return f;
}

FourierSeries FourierSeries::resized(int L) const {
  FourierSeries out(L);
  const int m = std::min(L, L_);
  for (int n = -m; n <= m; ++n) out.c_(n + L) = c_(n + L_);
  return out;
}

RVec FourierSeries::cosine_coeffs() const {
  RVec a(L_ + 1);
  a(0) = c_(L_).real();
  for (int n = 1; n <= L_; ++n) a(n) = (c_(L_ + n) + c_(L_ - n)).real();
  return a;
}

FourierSeries FourierSeries::derivative() const {
  return multiplied([](int n) { return cplx(0.0, n); });
}

FourierSeries FourierSeries::antiderivative() const {
  FourierSeries out(L_);
  cplx sum{};
  for (int n = -L_; n <= L_; ++n) {
    if (n == 0) continue;
    out.c_(n + L_) = c_(n + L_) / cplx(0.0, n);
    sum += out.c_(n + L_);
  }
  out.c_(L_) = -sum;
  return out;
}

FourierSeries FourierSeries::multiplied(const std::function<cplx(int)>& symbol) const {
  FourierSeries out(L_);
  for (int n = -L_; n <= L_; ++n) {
    const cplx v = c_(n + L_);
    if (v != cplx{}) out.c_(n + L_) = symbol(n) * v;
  }
  return out;
}

cplx FourierSeries::eval(double theta) const {
  cplx acc{};
  for (int n = -L_; n <= L_; ++n) acc += c_(n + L_) * std::polar(1.0, n * theta);
  return acc;
}

std::vector<double> FourierSeries::samples(int G) const {
  std::vector<double> out(static_cast<std::size_t>(G));
  for (int j = 0; j < G; ++j) {
    cplx acc{};
    for (int n = -L_; n <= L_; ++n) {
      const double t = kTwoPi * static_cast<double>(((static_cast<long>(n) * j) % G + G) % G) / G;
      acc += c_(n + L_) * cplx(std::cos(t), std::sin(t));
    }
    out[static_cast<std::size_t>(j)] = acc.real();
  }
  return out;
}

double FourierSeries::sup_norm(int G) const {
  double m = 0.0;
  for (int j = 0; j < G; ++j) m = std::max(m, std::abs(eval(kTwoPi * j / G)));
  return m;
}

FourierSeries& FourierSeries::operator+=(const FourierSeries& o) {
  if (o.L_ > L_) *this = resized(o.L_);
  for (int n = -o.L_; n <= o.L_; ++n) c_(n + L_) += o.c_(n + o.L_);
  return *this;
}

FourierSeries& FourierSeries::operator-=(const FourierSeries& o) {
  if (o.L_ > L_) *this = resized(o.L_);
  for (int n = -o.L_; n <= o.L_; ++n) c_(n + L_) -= o.c_(n + o.L_);
  return *this;
}

FourierSeries& FourierSeries::operator*=(cplx s) {
  c_ *= s;
  return *this;
}

FourierSeries operator+(FourierSeries a, const FourierSeries& b) { return a += b; }
FourierSeries operator-(FourierSeries a, const FourierSeries& b) { return a -= b; }
FourierSeries operator*(cplx s, FourierSeries a) { return a *= s; }

FourierSeries product(const FourierSeries& a, const FourierSeries& b) {
  const int La = a.bandwidth();
  const int Lb = b.bandwidth();
  FourierSeries out(La + Lb);
  for (int m = -La; m <= La; ++m) {
    const cplx am = a.coeffs()(m + La);
    if (am == cplx{}) continue;
    for (int n = -Lb; n <= Lb; ++n) out.coeffs()(m + n + La + Lb) += am * b.coeffs()(n + Lb);
  }
  return out;
}

cplx inner(const FourierSeries& f, const FourierSeries& g) {
  const int L = std::min(f.bandwidth(), g.bandwidth());
  cplx acc{};
  for (int n = -L; n <= L; ++n) acc += std::conj(f.coeff(n)) * g.coeff(n);
  return kTwoPi * acc;
}

RVec cosine_projection(const std::vector<double>& values, int N) {
  const int G = static_cast<int>(values.size());
  RVec a = RVec::Zero(N + 1);
  for (int n = 0; n <= N; ++n) {
    double acc = 0.0;
    for (int j = 0; j < G; ++j) {
      const double t = kTwoPi * static_cast<double>((static_cast<long>(n) * j) % G) / G;
      acc += values[static_cast<std::size_t>(j)] * std::cos(t);
    }
    a(n) = (n == 0 ? 1.0 : 2.0) * acc / G;
  }
  return a;
}

std::vector<double> cosine_samples(const RVec& a, int G) {
  std::vector<double> out(static_cast<std::size_t>(G), 0.0);
  for (int j = 0; j < G; ++j) {
    double acc = 0.0;
    for (int n = 0; n < a.size(); ++n) {
      const double t = kTwoPi * static_cast<double>((static_cast<long>(n) * j) % G) / G;
      acc += a(n) * std::cos(t);
    }
    out[static_cast<std::size_t>(j)] = acc;
  }
  return out;
}

}  // namespace modstab
