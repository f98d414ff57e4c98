#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "modstab/spectral.hpp"

using namespace modstab;

namespace {

FourierSeries random_series(int L, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  CVec c(2 * L + 1);
  for (auto& x : c) x = cplx(g(rng), g(rng));
  return FourierSeries(L, c);
}

}  // namespace

TEST(Spectral, CosineRoundTrip) {
  RVec a(5);
  a << 0.3, -1.0, 0.25, 0.0, 2.0;
  const auto s = FourierSeries::from_cosine(a, 8);
  EXPECT_EQ(s.bandwidth(), 8);
  const RVec back = s.cosine_coeffs();
  for (int n = 0; n < 5; ++n) EXPECT_NEAR(back(n), a(n), 1e-15);
  for (int n = 5; n <= 8; ++n) EXPECT_EQ(back(n), 0.0);
  EXPECT_NEAR(s.eval(0.7).real(), a(0) + a(1) * std::cos(0.7) + a(2) * std::cos(1.4) + a(4) * std::cos(2.8), 1e-14);
}

TEST(Spectral, SamplesAndProjectionAreInverse) {
  std::mt19937_64 rng(7);
  const auto s = random_series(6, rng);
  // Real part only survives samples(); compare against the Hermitian part.
  const auto v = s.samples(32);
  const auto back = FourierSeries::from_samples(v, 6);
  for (int n = -6; n <= 6; ++n) {
    const cplx herm = 0.5 * (s.coeff(n) + std::conj(s.coeff(-n)));
    EXPECT_NEAR(std::abs(back.coeff(n) - herm), 0.0, 1e-13);
  }
}

TEST(Spectral, ProductIsExactConvolution) {
  std::mt19937_64 rng(11);
  const auto a = random_series(4, rng);
  const auto b = random_series(5, rng);
  const auto p = product(a, b);
  EXPECT_EQ(p.bandwidth(), 9);
  for (double t : {0.0, 0.4, 2.5, 5.9}) {
    EXPECT_NEAR(std::abs(p.eval(t) - a.eval(t) * b.eval(t)), 0.0, 1e-12);
  }
}

TEST(Spectral, DerivativeAndAntiderivative) {
  std::mt19937_64 rng(3);
  auto s = random_series(5, rng);
  s.coeffs()(5) = 0.0;
  const auto anti = s.antiderivative();
  EXPECT_NEAR(std::abs(anti.eval(0.0)), 0.0, 1e-14);
  const auto d = anti.derivative();
  for (int n = -5; n <= 5; ++n) EXPECT_NEAR(std::abs(d.coeff(n) - s.coeff(n)), 0.0, 1e-14);
  const double h = 1e-5;
  const cplx fd = (s.eval(1.0 + h) - s.eval(1.0 - h)) / (2 * h);
  EXPECT_NEAR(std::abs(fd - s.derivative().eval(1.0)), 0.0, 1e-8);
}

TEST(Spectral, InnerProductConvention) {
  RVec one(1);
  one << 1.0;
  RVec cosine(2);
  cosine << 0.0, 1.0;
  const auto u = FourierSeries::from_cosine(one, 3);
  const auto c = FourierSeries::from_cosine(cosine, 3);
  EXPECT_NEAR(inner(u, u).real(), 2 * std::numbers::pi, 1e-14);
  EXPECT_NEAR(inner(c, c).real(), std::numbers::pi, 1e-14);
  EXPECT_NEAR(std::abs(inner(u, c)), 0.0, 1e-15);
  // Conjugate-linear in the first slot.
  EXPECT_NEAR(std::abs(inner(cplx(0, 1) * u, u) - cplx(0, -2 * std::numbers::pi)), 0.0, 1e-14);
}

TEST(Spectral, CosineProjectionOfSamples) {
  RVec a(4);
  a << 1.0, 0.5, -0.25, 0.125;
  const auto v = cosine_samples(a, 16);
  const RVec back = cosine_projection(v, 3);
  for (int n = 0; n < 4; ++n) EXPECT_NEAR(back(n), a(n), 1e-15);
}

TEST(Spectral, MultipliedSkipsZeroCoefficients) {
  RVec a(3);
  a << 0.0, 1.0, 0.0;
  const auto s = FourierSeries::from_cosine(a, 2);
  const auto m = s.multiplied([](int n) { return n == 0 ? cplx(std::nan(""), 0.0) : cplx(n * n, 0.0); });
  EXPECT_EQ(m.coeff(0), cplx(0.0));
  EXPECT_NEAR(m.coeff(1).real(), 0.5, 1e-15);
}
