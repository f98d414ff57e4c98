#include "modstab/modulation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace modstab {

const char* to_string(Classification c) noexcept {
  switch (c) {
    case Classification::StrictlyHyperbolic: return "StrictlyHyperbolic";
    case Classification::WeaklyHyperbolic: return "WeaklyHyperbolic";
    case Classification::Elliptic: return "Elliptic";
    case Classification::Marginal: return "Marginal";
  }
  return "Marginal";
}

Classification classification_from_string(const std::string& s) {
  for (auto c : {Classification::StrictlyHyperbolic, Classification::WeaklyHyperbolic,
                 Classification::Elliptic, Classification::Marginal}) {
    if (s == to_string(c)) return c;
  }
  throw Error(ErrorKind::Parse, "unknown classification '" + s + "'");
}

ModulationMatrix assemble_modulation_matrix(const TravelingWave& wave, const ParameterJacobian& pjac,
                                            double tol, const detail::ModulationVariant& variant) {
  if (wave.degenerate) {
    throw Error(ErrorKind::AssumptionViolated, "modulation matrix needs a non-constant wave");
  }
  const LinearizedOperators ops(wave);
  const int N = wave.N;
  const double k = wave.k;
  const FourierSeries phi = wave.series();
  const FourierSeries dphi = phi.derivative();
  FourierSeries one(N);
  one.coeffs()(N) = 1.0;
  const std::array<FourierSeries, 3> d = {FourierSeries::from_cosine(pjac.phi_k, N),
                                          FourierSeries::from_cosine(pjac.phi_M, N),
                                          FourierSeries::from_cosine(pjac.phi_P, N)};

  ModulationMatrix mm;
  mm.tol = tol;
  mm.D(0, 0) = -k * pjac.c_k - wave.c;
  mm.D(0, 1) = -k * pjac.c_M;
  mm.D(0, 2) = -k * pjac.c_P;
  for (int j = 0; j < 3; ++j) {
    const auto& u = d[static_cast<std::size_t>(j)];
    const FourierSeries base = ops.apply_fprime(u) + ops.apply_K(u);
    mm.D(1, j) = -inner(one, base).real();
    FourierSeries row3 = base - cplx(k) * ops.apply_K1(u.derivative());
    if (j == 0) {
      row3 -= ops.apply_K1(dphi);
      if (!variant.drop_half_kK2) row3 += cplx(0.5 * k) * ops.apply_K2(dphi.derivative());
    }
    mm.D(2, j) = -inner(phi, row3).real();
  }
  mm.speeds = characteristic_speeds(mm.D);
  mm.classification = classify_hyperbolicity(mm.speeds, tol);
  return mm;
}

std::array<double, 3> modulation_row2_quadrature(const TravelingWave& wave,
                                                 const ParameterJacobian& pjac) {
  const int G = nonlinear_grid_size(wave.spec, wave.N) * 2;
  const std::vector<double> phi = cosine_samples(wave.coeffs, G);
  const double c0 = phase_speed(wave.spec, 0.0, 0);
  const std::array<const RVec*, 3> d = {&pjac.phi_k, &pjac.phi_M, &pjac.phi_P};
  std::array<double, 3> out{};
  for (int j = 0; j < 3; ++j) {
    const std::vector<double> u = cosine_samples(*d[static_cast<std::size_t>(j)], G);
    double acc = 0.0;
    for (int i = 0; i < G; ++i) {
      const auto s = static_cast<std::size_t>(i);
      acc += wave.spec.nonlinearity.eval(phi[s], 1) * u[s];
    }
    // K* acts on the mean as c(0), and only the mean survives integration.
    out[static_cast<std::size_t>(j)] =
        -(2.0 * std::numbers::pi * acc / G + 2.0 * std::numbers::pi * c0 * (*d[static_cast<std::size_t>(j)])(0));
  }
  return out;
}

Speeds characteristic_speeds(const RMat& D) {
  if (D.rows() != 3 || D.cols() != 3) throw Error(ErrorKind::InvalidArgument, "expected a 3x3 matrix");
  // λ³ + a λ² + b λ + c
  const double a = -D.trace();
  const double b = D(0, 0) * D(1, 1) - D(0, 1) * D(1, 0) + D(0, 0) * D(2, 2) - D(0, 2) * D(2, 0) +
                   D(1, 1) * D(2, 2) - D(1, 2) * D(2, 1);
  const double c = -D.determinant();
  auto poly = [&](cplx x) { return ((x + a) * x + b) * x + c; };
  auto dpoly = [&](cplx x) { return (3.0 * x + 2.0 * a) * x + b; };

  const double p = b - a * a / 3.0;
  const double q = 2.0 * a * a * a / 27.0 - a * b / 3.0 + c;
  const cplx disc = std::sqrt(cplx(q * q / 4.0 + p * p * p / 27.0));
  cplx u = std::pow(cplx(-q / 2.0) + disc, 1.0 / 3.0);
  if (std::abs(u) < 1e-300) u = std::pow(cplx(-q / 2.0) - disc, 1.0 / 3.0);
  const cplx w(-0.5, std::sqrt(3.0) / 2.0);
  Speeds roots{};
  for (int m = 0; m < 3; ++m) {
    const cplx um = u * std::pow(w, m);
    const cplx vm = std::abs(um) < 1e-300 ? cplx{} : -p / (3.0 * um);
    roots[static_cast<std::size_t>(m)] = um + vm - a / 3.0;
  }
  for (auto& x : roots) {
    for (int it = 0; it < 8; ++it) {
      const cplx f = poly(x);
      const cplx df = dpoly(x);
      if (f == cplx{} || df == cplx{}) break;
      const cplx y = x - f / df;
      if (!(std::abs(poly(y)) < std::abs(f))) break;
      x = y;
    }
  }
  // D is real: make a near-conjugate pair exactly conjugate so the ordering is stable.
  double scale = 1.0;
  for (const auto& x : roots) scale = std::max(scale, std::abs(x));
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = i + 1; j < 3; ++j) {
      cplx& x = roots[i];
      cplx& y = roots[j];
      if (x.imag() * y.imag() < 0.0 && std::abs(x.real() - y.real()) <= 1e-10 * scale) {
        const double re = 0.5 * (x.real() + y.real());
        const double im = 0.5 * (std::abs(x.imag()) + std::abs(y.imag()));
        x = cplx(re, std::copysign(im, x.imag()));
        y = cplx(re, std::copysign(im, y.imag()));
      }
    }
  }
  std::sort(roots.begin(), roots.end(), [](cplx l, cplx r) {
    return l.real() != r.real() ? l.real() < r.real() : l.imag() < r.imag();
  });
  return roots;
}

Classification classify_hyperbolicity(const Speeds& speeds, double tol) {
  if (!(tol > 0.0)) throw Error(ErrorKind::InvalidArgument, "classification tol must be > 0");
  double max_abs = 0.0;
  double max_imag = 0.0;
  for (const auto& m : speeds) {
    max_abs = std::max(max_abs, std::abs(m));
    max_imag = std::max(max_imag, std::abs(m.imag()));
  }
  const double thr = tol * (1.0 + max_abs);
  if (max_imag > 10.0 * thr) return Classification::Elliptic;
  if (max_imag >= thr / 10.0) return Classification::Marginal;
  double gap = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = i + 1; j < 3; ++j) gap = std::min(gap, std::abs(speeds[i].real() - speeds[j].real()));
  }
  return gap > thr ? Classification::StrictlyHyperbolic : Classification::WeaklyHyperbolic;
}

}  // namespace modstab
