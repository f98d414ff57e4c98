#include "modstab/bloch.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>

namespace modstab {

const char* to_string(Consistency c) noexcept {
  switch (c) {
    case Consistency::Consistent: return "true";
    case Consistency::Inconsistent: return "false";
    case Consistency::Indeterminate: return "indeterminate";
  }
  return "indeterminate";
}

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

using lcplx = std::complex<long double>;
using LMat = Eigen::Matrix<lcplx, Eigen::Dynamic, Eigen::Dynamic>;

/// Second-order diagonal symbol at mode n.
cplx second_order_symbol(const LinearizedOperators& ops, const EquationSpec& spec, int n,
                         const detail::BlochVariant& variant) {
  if (variant.literal_A2) {
    if (n == 0) return {};
    const double q = n * ops.k();
    return {0.0, 0.5 * q * phase_speed(spec, q, 2)};
  }
  const double w2 = ops.omega2(n);
  if (std::isnan(w2)) {
    throw Error(ErrorKind::UnsupportedSymbol, "second-order Bloch term needs Omega''(0)");
  }
  return {0.0, 0.5 * w2};
}

CMat taylor2_matrix(const TravelingWave& wave, const LinearizedOperators& ops, double tau,
                    const detail::BlochVariant& variant) {
  const int N = ops.N();
  const cplx ikt(0.0, wave.k * tau);
  CMat A = ops.A0() + ikt * ops.A1();
  for (int n = -N; n <= N; ++n) {
    A(n + N, n + N) += ikt * ikt * second_order_symbol(ops, wave.spec, n, variant);
  }
  return A;
}

CMat exact_matrix(const TravelingWave& wave, const LinearizedOperators& ops, double tau) {
  const int N = ops.N();
  const double k = wave.k;
  CMat A = -ops.toeplitz();
  for (int n = -N; n <= N; ++n) A(n + N, n + N) += wave.c;
  for (int m = -N; m <= N; ++m) A.row(m + N) *= cplx(0.0, k * (m + tau));
  for (int n = -N; n <= N; ++n) {
    A(n + N, n + N) -= cplx(0.0, omega_eval(wave.spec, k * (n + tau), 0));
  }
  return A;
}

/// Row-scaled copy: nonzero rows normalized to unit 2-norm.
CMat row_equilibrated(const CMat& A) {
  CMat B = A;
  for (Eigen::Index i = 0; i < B.rows(); ++i) {
    const double r = B.row(i).norm();
    if (r > 0.0) B.row(i) /= r;
  }
  return B;
}

int null_dimension(const CMat& A, double rel) {
  Eigen::JacobiSVD<CMat> svd(row_equilibrated(A));
  const RVec& s = svd.singularValues();
  int count = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) count += s(i) <= rel * s(0) ? 1 : 0;
  return count;
}

}  // namespace

BlochOperator assemble_bloch(const TravelingWave& wave, double tau, BlochForm form,
                             const detail::BlochVariant& variant) {
  if (!(std::abs(tau) < 0.5)) throw Error(ErrorKind::InvalidArgument, "|tau| must be < 1/2");
  const LinearizedOperators ops(wave);
  BlochOperator op;
  op.tau = tau;
  op.N = wave.N;
  op.k = wave.k;
  op.form = form;
  op.matrix = form == BlochForm::Exact ? exact_matrix(wave, ops, tau)
                                       : taylor2_matrix(wave, ops, tau, variant);
  return op;
}

double taylor_remainder(const TravelingWave& wave, double tau, const detail::BlochVariant& variant) {
  const LinearizedOperators ops(wave);
  return (exact_matrix(wave, ops, tau) - taylor2_matrix(wave, ops, tau, variant)).cwiseAbs().maxCoeff();
}

std::vector<EigenPair> spectrum_near_origin(const BlochOperator& op, double radius, double c,
                                            std::size_t max_count) {
  if (radius < 0.0) radius = 10.0 * op.k * std::abs(op.tau) * (1.0 + std::abs(c));
  const LMat A = op.matrix.cast<lcplx>();
  std::vector<lcplx> values;
  bool done = false;
  if (op.tau != 0.0) {
    // Shift-invert in extended precision: the three small eigenvalues sit next to a Jordan block
    // and lose several digits in a double eigensolve of stiff symbols.
    const Eigen::PartialPivLU<LMat> lu(A);
    if (lu.rcond() > 1e-18L) {
      Eigen::ComplexEigenSolver<LMat> es(lu.inverse(), false);
      if (es.info() == Eigen::Success) {
        for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
          const lcplx mu = es.eigenvalues()(i);
          if (mu != lcplx{}) values.push_back(1.0L / mu);
        }
        done = true;
      }
    }
  }
  if (!done) {
    Eigen::ComplexEigenSolver<LMat> es(A, false);
    if (es.info() != Eigen::Success) {
      throw Error(ErrorKind::Numeric, "eigensolver failed on the Bloch matrix");
    }
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) values.push_back(es.eigenvalues()(i));
  }
  std::sort(values.begin(), values.end(),
            [](const lcplx& x, const lcplx& y) { return std::abs(x) < std::abs(y); });
  std::vector<EigenPair> out;
  const Eigen::Index n = A.rows();
  for (const lcplx& lam : values) {
    if (out.size() >= max_count || std::abs(lam) > radius) break;
    // inverse iteration for the eigenvector
    const Eigen::PartialPivLU<LMat> shifted(A - lam * LMat::Identity(n, n));
    Eigen::Matrix<lcplx, Eigen::Dynamic, 1> v = Eigen::Matrix<lcplx, Eigen::Dynamic, 1>::Ones(n);
    for (int it = 0; it < 3; ++it) {
      v = shifted.solve(v);
      v /= v.norm();
    }
    out.push_back({cplx(lam), v.cast<cplx>()});
  }
  return out;
}

std::vector<double> adaptive_tau_list(const TravelingWave& wave, const DhatMatrix& dhat) {
  double gap = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = i + 1; j < 3; ++j) gap = std::min(gap, std::abs(dhat.eigs[i] - dhat.eigs[j]));
  }
  const double curvature = wave.k * (1.0 + std::abs(omega_eval(wave.spec, wave.k, 2)));
  const double top = std::clamp(0.25 * gap / curvature, 1e-4, 1e-2);
  return {top, top / 2.0, top / 4.0, top / 8.0};
}

std::vector<cplx> full_spectrum(const BlochOperator& op) {
  Eigen::ComplexEigenSolver<CMat> es(op.matrix, false);
  if (es.info() != Eigen::Success) throw Error(ErrorKind::Numeric, "eigensolver failed on the Bloch matrix");
  std::vector<cplx> out(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
  return out;
}

DhatMatrix assemble_dhat0(const TravelingWave& wave, const ParameterJacobian& pjac,
                          const KernelBases& bases, const detail::BlochVariant& variant) {
  const LinearizedOperators ops(wave);
  const int N = wave.N;
  const double k = wave.k;
  const FourierSeries phi_k = FourierSeries::from_cosine(pjac.phi_k, N);
  DhatMatrix out;
  out.Dhat(0, 0) = -k * pjac.c_k;
  out.Dhat(0, 1) = -k * pjac.c_M;
  out.Dhat(0, 2) = -k * pjac.c_P;
  const FourierSeries& Phi1 = bases.Phi[0];
  const FourierSeries A2Phi1 =
      Phi1.multiplied([&](int n) { return second_order_symbol(ops, wave.spec, n, variant); });
  const FourierSeries first = ops.apply_A1(phi_k) + A2Phi1;
  for (int j = 1; j < 3; ++j) {
    const FourierSeries& psi = bases.Psi[static_cast<std::size_t>(j)];
    out.Dhat(j, 0) = inner(psi, first);
    for (int l = 1; l < 3; ++l) out.Dhat(j, l) = inner(psi, ops.apply_A1(bases.Phi[static_cast<std::size_t>(l)]));
  }
  out.imag_residue = out.Dhat.imag().cwiseAbs().maxCoeff();
  Eigen::ComplexEigenSolver<CMat> es(out.Dhat, true);
  std::array<int, 3> idx = {0, 1, 2};
  std::sort(idx.begin(), idx.end(), [&](int a, int b) {
    const cplx x = es.eigenvalues()(a);
    const cplx y = es.eigenvalues()(b);
    return x.real() != y.real() ? x.real() < y.real() : x.imag() < y.imag();
  });
  for (int i = 0; i < 3; ++i) {
    out.eigs[static_cast<std::size_t>(i)] = es.eigenvalues()(idx[static_cast<std::size_t>(i)]);
    out.eigvecs.col(i) = es.eigenvectors().col(idx[static_cast<std::size_t>(i)]);
  }
  return out;
}

ConnectionReport verify_connection(const TravelingWave& wave, const ParameterJacobian& pjac,
                                   const KernelBases& bases, double tol,
                                   const detail::ModulationVariant& mvariant,
                                   const detail::BlochVariant& bvariant) {
  const ModulationMatrix mm = assemble_modulation_matrix(wave, pjac, 1e-6, mvariant);
  const DhatMatrix dh = assemble_dhat0(wave, pjac, bases, bvariant);
  ConnectionReport rep;
  rep.tol = tol;
  rep.D = mm.D;
  rep.Dhat_minus_c = dh.Dhat.real() - wave.c * RMat::Identity(3, 3);
  rep.entry_errors = (rep.D - rep.Dhat_minus_c).cwiseAbs();
  const double scale = std::max(rep.D.cwiseAbs().maxCoeff(), 1e-300);
  Eigen::Index r = 0;
  Eigen::Index c = 0;
  rep.max_entry_error = rep.entry_errors.maxCoeff(&r, &c) / scale;
  rep.worst_row = static_cast<int>(r);
  rep.worst_col = static_cast<int>(c);
  rep.pass = rep.max_entry_error <= tol;
  return rep;
}

BranchSlopes branch_slopes(const TravelingWave& wave, const ParameterJacobian& pjac,
                           const KernelBases& bases, const std::vector<double>& requested) {
  const DhatMatrix dh = assemble_dhat0(wave, pjac, bases);
  const std::vector<double> tau_list = requested.empty() ? adaptive_tau_list(wave, dh) : requested;
  if (tau_list.size() < 3) throw Error(ErrorKind::InvalidArgument, "branch_slopes needs at least 3 tau values");
  for (std::size_t i = 0; i < tau_list.size(); ++i) {
    if (!(tau_list[i] > 0.0 && tau_list[i] <= 0.1) || (i > 0 && !(tau_list[i] < tau_list[i - 1]))) {
      throw Error(ErrorKind::InvalidArgument, "tau list must be decreasing within (0, 0.1]");
    }
  }
  const Eigen::FullPivLU<CMat> eig_lu(dh.eigvecs);
  const double k = wave.k;

  BranchSlopes out;
  out.tau = tau_list;
  out.reference = dh.eigs;
  for (double tau : tau_list) {
    const BlochOperator op = assemble_bloch(wave, tau, BlochForm::Exact);
    std::vector<EigenPair> near = spectrum_near_origin(op, std::numeric_limits<double>::infinity(), 0.0, 3);
    if (near.size() < 3) throw Error(ErrorKind::Numeric, "fewer than three eigenvalues near the origin");
    near.resize(3);
    const cplx ikt(0.0, k * tau);
    // weights(b, i): share of branch b's reduced vector along eigenvector i of D̂₀
    RMat weights(3, 3);
    for (int b = 0; b < 3; ++b) {
      const CVec& v = near[static_cast<std::size_t>(b)].vector;
      CVec z(3);
      for (int j = 0; j < 3; ++j) z(j) = kTwoPi * bases.Psi[static_cast<std::size_t>(j)].coeffs().dot(v);
      z(0) *= ikt;
      const CVec alpha = eig_lu.solve(z);
      const double total = alpha.cwiseAbs().sum();
      for (int i = 0; i < 3; ++i) weights(b, i) = total > 0.0 ? std::abs(alpha(i)) / total : 0.0;
    }
    std::array<int, 3> perm = {0, 1, 2};
    std::array<int, 3> best = perm;
    double best_score = -1.0;
    do {
      double score = 0.0;
      for (int b = 0; b < 3; ++b) score += weights(b, perm[static_cast<std::size_t>(b)]);
      if (score > best_score) {
        best_score = score;
        best = perm;
      }
    } while (std::next_permutation(perm.begin(), perm.end()));
    for (int b = 0; b < 3; ++b) {
      std::array<double, 3> w = {weights(b, 0), weights(b, 1), weights(b, 2)};
      std::sort(w.begin(), w.end());
      if (w[1] >= 0.9 * w[2]) out.ambiguous = true;
    }
    Speeds lam{};
    Speeds s{};
    for (int b = 0; b < 3; ++b) {
      const auto i = static_cast<std::size_t>(best[static_cast<std::size_t>(b)]);
      lam[i] = near[static_cast<std::size_t>(b)].value;
      s[i] = lam[i] / ikt;
    }
    out.lambdas.push_back(lam);
    out.slopes.push_back(s);
    double err = 0.0;
    for (std::size_t i = 0; i < 3; ++i) err = std::max(err, std::abs(s[i] - dh.eigs[i]));
    out.errors.push_back(err);
  }
  const std::size_t n = tau_list.size();
  const double t1 = tau_list[n - 2];
  const double t2 = tau_list[n - 1];
  for (std::size_t i = 0; i < 3; ++i) {
    out.extrapolated[i] = (t1 * out.slopes[n - 1][i] - t2 * out.slopes[n - 2][i]) / (t1 - t2);
    out.extrapolated_error = std::max(out.extrapolated_error, std::abs(out.extrapolated[i] - dh.eigs[i]));
  }
  double scale = 1.0;
  for (const auto& e : dh.eigs) scale = std::max(scale, std::abs(e));
  out.observed_order = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (out.errors[i + 1] <= 1e-10 * scale) continue;
    const double order = std::log(out.errors[i] / out.errors[i + 1]) / std::log(tau_list[i] / tau_list[i + 1]);
    out.observed_order = std::min(out.observed_order, order);
  }
  return out;
}

double hausdorff_distance(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  auto directed = [](const std::vector<cplx>& x, const std::vector<cplx>& y) {
    double d = 0.0;
    for (const auto& p : x) {
      double m = std::numeric_limits<double>::infinity();
      for (const auto& q : y) m = std::min(m, std::abs(p - q));
      d = std::max(d, m);
    }
    return d;
  };
  return std::max(directed(a, b), directed(b, a));
}

SymmetryReport symmetry_check(const TravelingWave& wave, double tau, double tol) {
  const BlochOperator plus = assemble_bloch(wave, tau, BlochForm::Exact);
  const BlochOperator minus = assemble_bloch(wave, -tau, BlochForm::Exact);
  const std::vector<cplx> sp = full_spectrum(plus);
  const std::vector<cplx> sm = full_spectrum(minus);
  std::vector<cplx> reflected;
  std::vector<cplx> conjugated;
  for (const auto& l : sp) {
    reflected.push_back(-std::conj(l));
    conjugated.push_back(std::conj(l));
  }
  SymmetryReport rep;
  rep.tau = tau;
  rep.tol = tol;
  Eigen::JacobiSVD<CMat> svd(plus.matrix);
  rep.norm = svd.singularValues()(0);
  rep.hamiltonian_distance = hausdorff_distance(sp, reflected);
  rep.conjugate_distance = hausdorff_distance(sm, conjugated);
  rep.pass = rep.hamiltonian_distance <= tol * rep.norm && rep.conjugate_distance <= tol * rep.norm;
  return rep;
}

MultiplicityReport kernel_multiplicity(const TravelingWave& wave, const KernelBases& bases) {
  const LinearizedOperators ops(wave);
  const CMat A0 = ops.A0();
  MultiplicityReport rep;
  Eigen::JacobiSVD<CMat> svd(A0);
  rep.norm_A0 = svd.singularValues()(0);
  Eigen::ComplexEigenSolver<CMat> es(A0, false);
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    rep.near_zero_eigs += std::abs(es.eigenvalues()(i)) <= 1e-8 * rep.norm_A0 ? 1 : 0;
  }
  rep.null_dim_A0 = null_dimension(A0, 1e-8);
  const CMat A0sq = A0 * A0;
  rep.null_dim_A0_squared = null_dimension(A0sq, 1e-8);

  Eigen::JacobiSVD<CMat> svd2(row_equilibrated(A0sq), Eigen::ComputeFullV);
  const Eigen::Index m = A0sq.cols();
  CMat G(3, 3);
  for (int i = 0; i < 3; ++i) {
    const CVec v = svd2.matrixV().col(m - 1 - i);
    for (int j = 0; j < 3; ++j) G(j, i) = kTwoPi * bases.Psi[static_cast<std::size_t>(j)].coeffs().dot(v);
  }
  Eigen::JacobiSVD<CMat> gs(G);
  const RVec& s = gs.singularValues();
  for (Eigen::Index i = 0; i < s.size(); ++i) rep.gram_rank += s(i) > 1e-6 * s(0) ? 1 : 0;
  return rep;
}

Verdict modulational_verdict(const TravelingWave& wave, const ParameterJacobian& pjac,
                             const KernelBases& bases, const VerdictOptions& opts) {
  Verdict v;
  const ModulationMatrix mm = assemble_modulation_matrix(wave, pjac, opts.tol);
  v.classification = mm.classification;
  v.speeds = mm.speeds;
  v.slopes = branch_slopes(wave, pjac, bases, opts.tau_list);
  const double k = wave.k;
  v.spectral_max_growth = -std::numeric_limits<double>::infinity();
  bool elliptic_ok = true;
  const std::vector<double>& taus = v.slopes.tau;
  for (std::size_t i = 0; i < taus.size(); ++i) {
    const double tau = taus[i];
    double g = 0.0;
    for (const auto& l : v.slopes.lambdas[i]) {
      g = std::max(g, std::abs(l.real()));
      v.spectral_max_growth = std::max(v.spectral_max_growth, l.real());
    }
    v.growth.push_back(g);
    v.growth_constant = std::max(v.growth_constant, g / (tau * tau));
    elliptic_ok = elliptic_ok && g > 10.0 * opts.tol * k * tau;
  }
  const double tau_min = taus.back();
  switch (v.classification) {
    case Classification::Elliptic:
      v.consistent = elliptic_ok ? Consistency::Consistent : Consistency::Inconsistent;
      break;
    case Classification::StrictlyHyperbolic:
      v.consistent = v.growth_constant * tau_min <= 10.0 * opts.tol * k ? Consistency::Consistent
                                                                          : Consistency::Inconsistent;
      break;
    default:
      v.consistent = Consistency::Indeterminate;
      break;
  }
  return v;
}

}  // namespace modstab
