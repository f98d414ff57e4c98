#include "modstab/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace modstab {

namespace {

double grid_sup(const FourierSeries& f, int N) { return f.sup_norm(2 * N + 2); }

void require_wave(const TravelingWave& wave) {
  if (wave.degenerate) {
    throw Error(ErrorKind::AssumptionViolated,
                "kernel bases need a non-constant wave (simple kernel assumption)");
  }
}

}  // namespace

double KernelReport::max_residual() const {
  double m = 0.0;
  for (const auto& [name, r] : residuals) m = std::max(m, r);
  return m;
}

KernelBases build_bases(const TravelingWave& wave, const ParameterJacobian& pjac) {
  require_wave(wave);
  const int N = wave.N;
  const FourierSeries phi = wave.series();
  const FourierSeries phi_P = FourierSeries::from_cosine(pjac.phi_P, N);
  KernelBases kb;
  kb.Phi = {phi.derivative(), FourierSeries::from_cosine(pjac.phi_M, N), phi_P};
  FourierSeries psi1 = phi_P.antiderivative();
  psi1 *= -1.0;
  FourierSeries one(N);
  one.coeffs()(N) = 1.0;
  kb.Psi = {psi1, one, phi};
  kb.psi1_mismatch = 2.0 * std::numbers::pi * std::abs(phi_P.coeff(0));
  kb.gram = RMat::Zero(3, 3);
  for (int j = 0; j < 3; ++j) {
    for (int l = 0; l < 3; ++l) {
      const cplx g = inner(kb.Psi[static_cast<std::size_t>(j)], kb.Phi[static_cast<std::size_t>(l)]);
      kb.gram(j, l) = g.real();
      kb.gram_imag = std::max(kb.gram_imag, std::abs(g.imag()));
    }
  }
  return kb;
}

KernelReport verify_kernel_identities(const TravelingWave& wave, const ParameterJacobian& pjac,
                                      const KernelBases& bases) {
  require_wave(wave);
  const LinearizedOperators ops(wave);
  const int N = wave.N;
  const double k = wave.k;
  const auto& Phi = bases.Phi;
  const auto& Psi = bases.Psi;
  KernelReport rep;
  auto& r = rep.residuals;

  r["A0 Phi1"] = grid_sup(ops.apply_A0(Phi[0]), N);
  r["A0 Phi2 + k c_M Phi1"] = grid_sup(ops.apply_A0(Phi[1]) + cplx(k * pjac.c_M) * Phi[0], N);
  r["A0 Phi3 + k c_P Phi1"] = grid_sup(ops.apply_A0(Phi[2]) + cplx(k * pjac.c_P) * Phi[0], N);
  r["A0adj Psi2"] = grid_sup(ops.apply_A0_adjoint(Psi[1]), N);
  r["A0adj Psi3"] = grid_sup(ops.apply_A0_adjoint(Psi[2]), N);
  r["A0adj Psi1 + b_P Psi2 + k c_P Psi3"] =
      grid_sup(ops.apply_A0_adjoint(Psi[0]) + cplx(pjac.b_P) * Psi[1] + cplx(k * pjac.c_P) * Psi[2], N);

  // A₀φ_k = −(c − f′ − K*)φ′ − k K₁*φ″ − k c_k φ′
  const FourierSeries phi_k = FourierSeries::from_cosine(pjac.phi_k, N);
  const FourierSeries& dphi = Phi[0];
  FourierSeries rhs = ops.apply_L(dphi);
  rhs *= -1.0 / k;
  rhs -= cplx(k) * ops.apply_K1(dphi.derivative());
  rhs -= cplx(k * pjac.c_k) * dphi;
  r["phi_k identity"] = grid_sup(ops.apply_A0(phi_k) - rhs, N);
  r["<Psi2, phi_k>"] = std::abs(inner(Psi[1], phi_k));
  r["<Psi3, phi_k>"] = std::abs(inner(Psi[2], phi_k));

  rep.b_P = pjac.b_P;
  rep.kc_M = k * pjac.c_M;
  rep.c_P = pjac.c_P;
  const double scale = 1.0 + std::abs(rep.b_P) + std::abs(rep.kc_M) + std::abs(rep.c_P);
  const bool first = std::abs(rep.b_P - rep.kc_M) <= 1e-8 * scale;
  const bool second = std::abs(rep.c_P) <= 1e-8 * scale;
  rep.degeneracy_branch = first && second ? "both" : first ? "b_P = k c_M" : second ? "c_P = 0" : "neither";
  r["(b_P - k c_M) c_P"] = std::abs((rep.b_P - rep.kc_M) * rep.c_P) / scale;
  return rep;
}

SimpleKernelCheck check_simple_kernel(const TravelingWave& wave, const ParameterJacobian& pjac,
                                      double tol_null, double tol_gap) {
  require_wave(wave);
  const LinearizedOperators ops(wave);
  const int N = wave.N;
  RVec w(2 * N + 1);
  for (int n = -N; n <= N; ++n) {
    w(n + N) = 1.0 + std::abs(wave.c) + std::abs(ops.symbol_K(n).real());
  }
  const CMat B = ops.L() * w.cwiseInverse().asDiagonal();
  Eigen::JacobiSVD<CMat> svd(B, Eigen::ComputeFullV);
  const RVec& s = svd.singularValues();
  const Eigen::Index m = s.size();
  SimpleKernelCheck out;
  out.norm = s(0);
  out.sigma_min = s(m - 1);
  out.sigma_next = s(m - 2);
  const CVec u = w.cwiseInverse().asDiagonal() * svd.matrixV().col(m - 1);
  const CVec dphi = wave.series().derivative().coeffs();
  out.alignment = std::abs(u.dot(dphi)) / (u.norm() * dphi.norm());
  out.cb_bracket = pjac.c_M * pjac.b_P - pjac.c_P * pjac.b_M;
  out.pass = out.sigma_min <= tol_null * out.norm && out.sigma_next >= tol_gap * out.norm;
  return out;
}

}  // namespace modstab
