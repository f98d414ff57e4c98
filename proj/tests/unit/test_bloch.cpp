#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "modstab/bloch.hpp"
#include "support/suite.hpp"

using namespace modstab;

namespace {

struct Prepared {
  TravelingWave wave;
  ParameterJacobian pjac;
  KernelBases bases;
};

Prepared prepare(const std::string& name, double k, double a) {
  Prepared p;
  p.wave = oracle::family_wave(name, k, a);
  p.pjac = parameter_derivatives(p.wave);
  p.bases = build_bases(p.wave, p.pjac);
  return p;
}

const Prepared& kdv() {
  static const Prepared p = prepare("kdv", 1.0, 0.1);
  return p;
}

const Prepared& whitham() {
  static const Prepared p = prepare("whitham", 1.25, 0.1);
  return p;
}

TravelingWave constant_state(const std::string& name, double k, double u_bar) {
  return continue_family(make_equation(name), k, u_bar, {0.0}).back();
}

}  // namespace

TEST(Bloch, ExactAtZeroAnnihilatesPhiPrime) {
  const auto& w = whitham().wave;
  const auto op = assemble_bloch(w, 0.0, BlochForm::Exact);
  const CVec dphi = w.series().derivative().coeffs();
  EXPECT_LE((op.matrix * dphi).cwiseAbs().maxCoeff(), 1e-9);
}

TEST(Bloch, ConstantStateDiagonalOracle) {
  for (const char* name : {"whitham", "kawahara", "kdv"}) {
    const double k = 0.9;
    const double u = 0.3;
    const auto w = constant_state(name, k, u);
    ASSERT_TRUE(w.degenerate);
    for (double tau : {0.0, 0.013, -0.2, 0.37}) {
      const auto op = assemble_bloch(w, tau, BlochForm::Exact);
      const int N = w.N;
      for (int m = -N; m <= N; ++m) {
        for (int n = -N; n <= N; ++n) {
          cplx expect{};
          if (m == n) {
            const double q = k * (n + tau);
            // i[k(n+τ)(c − f′(ū)) − Ω(k(n+τ))], with Ω(q) written out per symbol.
            double omega = 0.0;
            if (std::string(name) == "whitham") omega = oracle::water_omega(q);
            if (std::string(name) == "kawahara") omega = -q * q * q + q * q * q * q * q;
            if (std::string(name) == "kdv") omega = q - q * q * q / 6.0;
            expect = cplx(0.0, q * (w.c - u) - omega);
          }
          ASSERT_LE(std::abs(op.matrix(m + N, n + N) - expect), 1e-12 * std::max(1.0, std::abs(expect)))
              << name << " tau=" << tau << " (" << m << "," << n << ")";
        }
      }
      const double scale = op.matrix.cwiseAbs().maxCoeff();
      for (const auto& lam : full_spectrum(op)) EXPECT_LE(std::abs(lam.real()), 1e-12 * scale);
      const auto sym = symmetry_check(w, tau == 0.0 ? 0.05 : tau);
      EXPECT_TRUE(sym.pass);
    }
  }
}

TEST(Bloch, TaylorRemainderIsCubic) {
  for (const char* name : {"whitham", "ilw", "kawahara"}) {
    const auto w = oracle::family_wave(name, 1.25, 0.1);
    const double r1 = taylor_remainder(w, 1e-2);
    const double r2 = taylor_remainder(w, 5e-3);
    const double r3 = taylor_remainder(w, 2.5e-3);
    EXPECT_GE(r1 / r2, 6.4) << name;
    EXPECT_LE(r1 / r2, 9.6) << name;
    EXPECT_GE(r2 / r3, 6.4) << name;
    EXPECT_LE(r2 / r3, 9.6) << name;
  }
}

TEST(Bloch, LiteralSecondOrderSymbolBreaksCubicRemainder) {
  const auto& w = whitham().wave;
  const detail::BlochVariant literal{.literal_A2 = true};
  const double ratio = taylor_remainder(w, 1e-2, literal) / taylor_remainder(w, 5e-3, literal);
  EXPECT_NEAR(ratio, 4.0, 0.4);
  const auto rep = verify_connection(w, whitham().pjac, whitham().bases, 1e-6, {}, literal);
  EXPECT_FALSE(rep.pass);
  EXPECT_EQ(rep.worst_row, 2);
  EXPECT_EQ(rep.worst_col, 0);
}

TEST(Bloch, RealnessSymmetryOfMatrix) {
  const auto& w = whitham().wave;
  const double tau = 0.07;
  const auto plus = assemble_bloch(w, tau, BlochForm::Exact);
  const auto minus = assemble_bloch(w, -tau, BlochForm::Exact);
  const int N = w.N;
  double err = 0.0;
  for (int m = -N; m <= N; ++m) {
    for (int n = -N; n <= N; ++n) {
      err = std::max(err, std::abs(minus.matrix(m + N, n + N) - std::conj(plus.matrix(-m + N, -n + N))));
    }
  }
  EXPECT_LE(err, 1e-13 * plus.matrix.cwiseAbs().maxCoeff());
}

TEST(Bloch, TripleZeroAndGeometricMultiplicityTwo) {
  for (const Prepared* p : {&kdv(), &whitham()}) {
    const auto rep = kernel_multiplicity(p->wave, p->bases);
    EXPECT_GE(rep.near_zero_eigs, 3);
    EXPECT_EQ(rep.null_dim_A0, 2);
    EXPECT_EQ(rep.null_dim_A0_squared, 3);
    EXPECT_EQ(rep.gram_rank, 3);
  }
}

TEST(Bloch, NearOriginSpectrumAgreesWithDenseSolve) {
  const auto& w = whitham().wave;
  const auto op = assemble_bloch(w, 0.01, BlochForm::Exact);
  const auto near = spectrum_near_origin(op);
  ASSERT_GE(near.size(), 3u);
  const auto all = full_spectrum(op);
  for (const auto& e : near) {
    double best = 1e300;
    for (const auto& z : all) best = std::min(best, std::abs(z - e.value));
    EXPECT_LE(best, 1e-9);
    const CVec r = op.matrix * e.vector - e.value * e.vector;
    EXPECT_LE(r.norm(), 1e-9 * e.vector.norm() * op.matrix.norm());
  }
  for (std::size_t i = 1; i < near.size(); ++i) EXPECT_LE(std::abs(near[i - 1].value), std::abs(near[i].value));
}

TEST(Bloch, DhatFirstRowAndRealness) {
  const auto& p = whitham();
  const auto dh = assemble_dhat0(p.wave, p.pjac, p.bases);
  const double k = p.wave.k;
  EXPECT_EQ(dh.Dhat(0, 0), cplx(-k * p.pjac.c_k));
  EXPECT_EQ(dh.Dhat(0, 1), cplx(-k * p.pjac.c_M));
  EXPECT_EQ(dh.Dhat(0, 2), cplx(-k * p.pjac.c_P));
  EXPECT_LE(dh.imag_residue, 1e-8 * (1 + dh.Dhat.cwiseAbs().maxCoeff()));
  const auto mm = assemble_modulation_matrix(p.wave, p.pjac);
  for (std::size_t j = 0; j < 3; ++j) {
    EXPECT_LE(std::abs(dh.eigs[j] - p.wave.c - mm.speeds[j]), 1e-6 * (1 + std::abs(mm.speeds[j])));
  }
}

TEST(Bloch, ConnectionHoldsOnExamples) {
  const auto& a = kdv();
  EXPECT_TRUE(verify_connection(a.wave, a.pjac, a.bases).pass);
  const auto b = prepare("whitham", 1.5, 0.05);
  const auto rep = verify_connection(b.wave, b.pjac, b.bases);
  EXPECT_TRUE(rep.pass);
  EXPECT_LE(rep.max_entry_error, 1e-6);
}

TEST(Bloch, DroppingHalfKK2IsLocalizedAtEntry31) {
  const auto& p = whitham();
  const auto rep = verify_connection(p.wave, p.pjac, p.bases, 1e-6, {.drop_half_kK2 = true});
  EXPECT_FALSE(rep.pass);
  EXPECT_EQ(rep.worst_row, 2);
  EXPECT_EQ(rep.worst_col, 0);
  RMat others = rep.entry_errors;
  others(2, 0) = 0.0;
  EXPECT_LE(others.maxCoeff(), 1e-6 * rep.D.cwiseAbs().maxCoeff());
}

TEST(Bloch, BranchSlopesConverge) {
  for (const Prepared* p : {&kdv(), &whitham()}) {
    const auto bs = branch_slopes(p->wave, p->pjac, p->bases, {1e-2, 5e-3, 2.5e-3, 1.25e-3});
    EXPECT_LE(bs.extrapolated_error, 1e-4);
    EXPECT_GE(bs.observed_order, 0.8);
    for (std::size_t i = 1; i < bs.errors.size(); ++i) EXPECT_LT(bs.errors[i], bs.errors[i - 1]);
    EXPECT_FALSE(bs.ambiguous);
  }
}

TEST(Bloch, SlopesOfTinyWaveApproachLinearLimit) {
  const double k = 1.0;
  const auto p = prepare("whitham", k, 2e-3);
  const auto dh = assemble_dhat0(p.wave, p.pjac, p.bases);
  const double c = p.wave.c;
  const double h = 1e-5;
  const double group = (oracle::water_omega(k + h) - oracle::water_omega(k - h)) / (2 * h);
  // c − f′(ū) − c(0) once, c − f′(ū) − Ω′(k) twice, at ū = 0.
  std::vector<double> expect = {c - 1.0, c - group, c - group};
  std::vector<double> got;
  for (const auto& e : dh.eigs) got.push_back(e.real());
  std::sort(expect.begin(), expect.end());
  std::sort(got.begin(), got.end());
  for (std::size_t j = 0; j < 3; ++j) EXPECT_NEAR(got[j], expect[j], 0.05);
  const auto bs = branch_slopes(p.wave, p.pjac, p.bases, {});
  EXPECT_LE(bs.extrapolated_error, 1e-4);
}

TEST(Bloch, AdaptiveTauList) {
  const auto& p = whitham();
  const auto dh = assemble_dhat0(p.wave, p.pjac, p.bases);
  const auto taus = adaptive_tau_list(p.wave, dh);
  ASSERT_EQ(taus.size(), 4u);
  EXPECT_LE(taus[0], 1e-2);
  EXPECT_GE(taus[0], 1e-4);
  for (std::size_t i = 1; i < 4; ++i) EXPECT_DOUBLE_EQ(taus[i], taus[i - 1] / 2);
  EXPECT_THROW(branch_slopes(p.wave, p.pjac, p.bases, {1e-2, 2e-2, 1e-3}), Error);
  EXPECT_THROW(branch_slopes(p.wave, p.pjac, p.bases, {1e-2, 1e-3}), Error);
}

TEST(Bloch, HamiltonianSymmetry) {
  for (const Prepared* p : {&kdv(), &whitham()}) {
    for (double tau : {0.05, 0.1}) {
      const auto rep = symmetry_check(p->wave, tau);
      EXPECT_TRUE(rep.pass) << tau << " " << rep.hamiltonian_distance << " " << rep.conjugate_distance;
    }
  }
}

TEST(Bloch, VerdictStrictKdv) {
  const auto& p = kdv();
  const auto v = modulational_verdict(p.wave, p.pjac, p.bases);
  EXPECT_EQ(v.classification, Classification::StrictlyHyperbolic);
  EXPECT_EQ(v.consistent, Consistency::Consistent);
  for (std::size_t i = 0; i < v.growth.size(); ++i) {
    EXPECT_LE(v.growth[i], v.growth_constant * v.slopes.tau[i] * v.slopes.tau[i] * (1 + 1e-12));
  }
}

TEST(Bloch, VerdictEllipticWhithamShowsQuartet) {
  const auto p = prepare("whitham", 2.0, 0.05);
  const auto v = modulational_verdict(p.wave, p.pjac, p.bases);
  EXPECT_EQ(v.classification, Classification::Elliptic);
  EXPECT_EQ(v.consistent, Consistency::Consistent);
  EXPECT_GT(v.spectral_max_growth, 0.0);
  const auto op = assemble_bloch(p.wave, 0.01, BlochForm::Exact);
  const auto near = spectrum_near_origin(op, -1.0, 0.0, 3);
  bool found = false;
  for (const auto& e : near) {
    if (std::abs(e.value.real()) < 1e-8) continue;
    found = true;
    const auto all = full_spectrum(op);
    double best = 1e300;
    for (const auto& z : all) best = std::min(best, std::abs(z + std::conj(e.value)));
    EXPECT_LE(best, 1e-8 * op.matrix.norm());
  }
  EXPECT_TRUE(found);
}

TEST(Bloch, VerdictMarginalIsIndeterminate) {
  const auto p = prepare("whitham", 1.16, 0.01);
  VerdictOptions vo;
  vo.tol = 1e-4;
  const auto v = modulational_verdict(p.wave, p.pjac, p.bases, vo);
  EXPECT_EQ(v.classification, Classification::Marginal);
  EXPECT_EQ(v.consistent, Consistency::Indeterminate);
  EXPECT_STREQ(to_string(v.consistent), "indeterminate");
}

TEST(Bloch, NonSmoothSymbolRefusesSecondOrderTerm) {
  const auto w = oracle::family_wave("benjamin-ono", 1.0, 0.05);
  try {
    assemble_bloch(w, 0.01, BlochForm::Taylor2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::UnsupportedSymbol);
  }
  EXPECT_NO_THROW(assemble_bloch(w, 0.01, BlochForm::Exact));
}

TEST(Bloch, HausdorffDistance) {
  EXPECT_EQ(hausdorff_distance({cplx(0), cplx(1)}, {cplx(1), cplx(0)}), 0.0);
  EXPECT_DOUBLE_EQ(hausdorff_distance({cplx(0)}, {cplx(0), cplx(3, 4)}), 5.0);
}
