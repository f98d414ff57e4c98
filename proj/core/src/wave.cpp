#include "modstab/wave.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace modstab {

namespace {

constexpr double kPi = std::numbers::pi;

enum class Closure { Momentum, Amplitude };

/// Galerkin system for unknowns x = (a₀..a_N, c, b).
class GalerkinSystem {
 public:
  GalerkinSystem(const EquationSpec& spec, double k, int N, int pad)
      : spec_(spec), k_(k), N_(N), G_(nonlinear_grid_size(spec, N, pad)),
        cos_(G_, N + 1), symbol_(N + 1), omega1_(N + 1) {
    for (int j = 0; j < G_; ++j) {
      for (int n = 0; n <= N; ++n) {
        const long m = (static_cast<long>(n) * j) % G_;
        cos_(j, n) = std::cos(2.0 * kPi * static_cast<double>(m) / G_);
      }
    }
    for (int n = 0; n <= N; ++n) {
      symbol_(n) = phase_speed(spec, n * k, 0);
      omega1_(n) = omega_eval(spec, n * k, 1);
    }
  }

  int size() const { return N_ + 3; }

  RVec residual(const RVec& x, Closure closure, double M, double target) const {
    const RVec a = x.head(N_ + 1);
    const double c = x(N_ + 1);
    const double b = x(N_ + 2);
    const RVec fhat = nonlinear_projection(a, 0);
    RVec E(size());
    for (int n = 0; n <= N_; ++n) E(n) = k_ * (-c * a(n) + fhat(n) + symbol_(n) * a(n));
    E(0) -= b;
    E(N_ + 1) = 2.0 * kPi * a(0) - M;
    E(N_ + 2) = closure == Closure::Momentum ? momentum(a) - target : a(1) - target;
    return E;
  }

  RMat jacobian(const RVec& x, Closure closure) const {
    const RVec a = x.head(N_ + 1);
    const double c = x(N_ + 1);
    const RVec phi = cos_ * a;
    RVec fp(G_);
    for (int j = 0; j < G_; ++j) fp(j) = spec_.nonlinearity.eval(phi(j), 1);
    RMat J = RMat::Zero(size(), size());
    // (w_n/G) Σ_j f'(φ_j) cos(mθ_j) cos(nθ_j)
    RMat weighted = cos_.transpose() * (fp.asDiagonal() * cos_);
    weighted /= static_cast<double>(G_);
    weighted.bottomRows(N_) *= 2.0;
    J.topLeftCorner(N_ + 1, N_ + 1) = k_ * weighted;
    for (int n = 0; n <= N_; ++n) {
      J(n, n) += k_ * (-c + symbol_(n));
      J(n, N_ + 1) = -k_ * a(n);
    }
    J(0, N_ + 2) = -1.0;
    J(N_ + 1, 0) = 2.0 * kPi;
    if (closure == Closure::Momentum) {
      J(N_ + 2, 0) = 2.0 * kPi * a(0);
      for (int n = 1; n <= N_; ++n) J(N_ + 2, n) = kPi * a(n);
    } else {
      J(N_ + 2, 1) = 1.0;
    }
    return J;
  }

  /// −∂E/∂k at fixed (a, c, b, M, P).
  RVec minus_dk(const RVec& x) const {
    const RVec a = x.head(N_ + 1);
    const double c = x(N_ + 1);
    const RVec fhat = nonlinear_projection(a, 0);
    RVec r = RVec::Zero(size());
    for (int n = 0; n <= N_; ++n) r(n) = -(-c * a(n) + fhat(n) + omega1_(n) * a(n));
    return r;
  }

  RVec nonlinear_projection(const RVec& a, int order) const {
    const RVec phi = cos_ * a;
    RVec f(G_);
    for (int j = 0; j < G_; ++j) f(j) = spec_.nonlinearity.eval(phi(j), order);
    RVec out = cos_.transpose() * f / static_cast<double>(G_);
    out.tail(N_) *= 2.0;
    return out;
  }

  static double momentum(const RVec& a) {
    return kPi * a(0) * a(0) + 0.5 * kPi * a.tail(a.size() - 1).squaredNorm();
  }

  int N() const { return N_; }

 private:
  const EquationSpec& spec_;
  double k_;
  int N_;
  int G_;
  RMat cos_;
  RVec symbol_;
  RVec omega1_;
};

double residual_norm(const RVec& E, int N) {
  return std::max({E.head(N + 1).cwiseAbs().sum(), std::abs(E(N + 1)), std::abs(E(N + 2))});
}

double equilibrated_condition(const RMat& J) {
  RVec scale = J.rowwise().lpNorm<Eigen::Infinity>();
  for (Eigen::Index i = 0; i < scale.size(); ++i) {
    if (scale(i) == 0.0) return std::numeric_limits<double>::infinity();
  }
  const RMat B = scale.cwiseInverse().asDiagonal() * J;
  Eigen::JacobiSVD<RMat> svd(B);
  const RVec& s = svd.singularValues();
  return s(s.size() - 1) > 0.0 ? s(0) / s(s.size() - 1) : std::numeric_limits<double>::infinity();
}

std::string point_label(double k, double M, double target, Closure closure) {
  std::ostringstream os;
  os.precision(10);
  os << " at (k=" << k << ", M=" << M << (closure == Closure::Momentum ? ", P=" : ", a1=")
     << target << ")";
  return os.str();
}

void check_common(const EquationSpec& spec, double k, const SolverOptions& opts) {
  require_assumption1(spec);
  if (!(k > 0.0) || !std::isfinite(k)) throw Error(ErrorKind::InvalidArgument, "k must be > 0");
  if (opts.N < 4) throw Error(ErrorKind::InvalidArgument, "N must be at least 4");
}

TravelingWave constant_wave(const EquationSpec& spec, double k, double u_bar, int N) {
  TravelingWave w;
  w.spec = spec;
  w.k = k;
  w.N = N;
  w.coeffs = RVec::Zero(N + 1);
  w.coeffs(0) = u_bar;
  w.c = spec.nonlinearity.eval(u_bar, 1) + phase_speed(spec, k, 0);
  w.b = k * (-w.c * u_bar + spec.nonlinearity.eval(u_bar, 0) + phase_speed(spec, 0.0, 0) * u_bar);
  w.degenerate = true;
  w.M_target = 2.0 * kPi * u_bar;
  w.P_target = kPi * u_bar * u_bar;
  w.newton_history = {0.0};
  return w;
}

TravelingWave newton(const EquationSpec& spec, double k, double M, double target,
                     Closure closure, const TravelingWave& seed, const SolverOptions& opts) {
  const int N = opts.N;
  GalerkinSystem sys(spec, k, N, opts.pad);
  RVec x = RVec::Zero(N + 3);
  const int n_seed = std::min<int>(N, static_cast<int>(seed.coeffs.size()) - 1);
  if (n_seed < 0) throw Error(ErrorKind::InvalidArgument, "seed wave has no coefficients");
  x.head(n_seed + 1) = seed.coeffs.head(n_seed + 1);
  x(N + 1) = seed.c;
  x(N + 2) = seed.b;

  std::vector<double> history;
  RVec x_accepted = x;
  int polish = 0;
  for (int it = 0;; ++it) {
    const RVec E = sys.residual(x, closure, M, target);
    const double r = residual_norm(E, N);
    if (!std::isfinite(r)) {
      throw ConvergenceError("Newton iterate diverged" + point_label(k, M, target, closure), r);
    }
    // Past tol, keep polishing while the residual still halves.
    if (!history.empty() && history.back() <= opts.tol_newton && !(r < 0.5 * history.back())) break;
    history.push_back(r);
    if (r <= opts.tol_newton) {
      x_accepted = x;
      if (++polish > 3) break;
    }
    if (it >= opts.max_iter) {
      if (polish > 0) break;
      std::ostringstream os;
      os << "Newton did not converge in " << opts.max_iter << " iterations (residual " << r << ")"
         << point_label(k, M, target, closure);
      throw ConvergenceError(os.str(), r);
    }
    const RMat J = sys.jacobian(x, closure);
    const double cond = equilibrated_condition(J);
    if (cond > opts.cond_max) {
      std::ostringstream os;
      os << "Jacobian condition number " << cond << " exceeds " << opts.cond_max
         << point_label(k, M, target, closure);
      throw Error(ErrorKind::IllConditioned, os.str());
    }
    x -= J.partialPivLu().solve(E);
  }
  x = x_accepted;

  TravelingWave w;
  w.spec = spec;
  w.k = k;
  w.N = N;
  w.coeffs = x.head(N + 1);
  w.c = x(N + 1);
  w.b = x(N + 2);
  w.newton_history = std::move(history);
  const double peak = w.coeffs.tail(N).cwiseAbs().maxCoeff();
  if (peak < 1e-12) {
    throw Error(ErrorKind::DegenerateParametrization,
                "Newton collapsed onto the constant state" + point_label(k, M, target, closure));
  }
  if (std::abs(w.coeffs(N)) > opts.decay_tol * w.coeffs.cwiseAbs().maxCoeff()) {
    std::ostringstream os;
    os << "profile under-resolved: |a_N| = " << std::abs(w.coeffs(N))
       << point_label(k, M, target, closure);
    throw Error(ErrorKind::NumericRange, os.str());
  }
  const ConservedTriple q = conserved_quantities(w);
  w.M_target = q.M;
  w.P_target = q.P;
  return w;
}

}  // namespace

int nonlinear_grid_size(const EquationSpec& spec, int N, int pad) {
  const int p = pad > 0 ? pad : std::max(2, spec.nonlinearity.degree());
  return p * (2 * N + 2);
}

std::vector<double> TravelingWave::grid() const { return cosine_samples(coeffs, 2 * N + 2); }

ProfileResidual profile_residual(const TravelingWave& wave) {
  const int G = 2 * wave.N + 2;
  RVec Kphi(wave.N + 1);
  for (int n = 0; n <= wave.N; ++n) Kphi(n) = phase_speed(wave.spec, n * wave.k, 0) * wave.coeffs(n);
  const std::vector<double> phi = cosine_samples(wave.coeffs, G);
  const std::vector<double> kphi = cosine_samples(Kphi, G);
  ProfileResidual out;
  out.residual.resize(static_cast<std::size_t>(G));
  for (int j = 0; j < G; ++j) {
    const auto i = static_cast<std::size_t>(j);
    out.residual[i] = -wave.k * wave.c * phi[i] +
                      wave.k * wave.spec.nonlinearity.eval(phi[i], 0) + wave.k * kphi[i] - wave.b;
    out.sup = std::max(out.sup, std::abs(out.residual[i]));
  }
  const ConservedTriple q = conserved_quantities(wave);
  out.M_error = q.M - wave.M_target;
  out.P_error = q.P - wave.P_target;
  return out;
}

TravelingWave stokes_seed(const EquationSpec& spec, double k, double u_bar, double amplitude,
                          int N) {
  TravelingWave w = constant_wave(spec, k, u_bar, N);
  if (N >= 1) w.coeffs(1) = amplitude;
  w.degenerate = amplitude == 0.0;
  return w;
}

TravelingWave solve_wave(const EquationSpec& spec, double k, double M_target, double P_target,
                         const TravelingWave& seed, const SolverOptions& opts) {
  check_common(spec, k, opts);
  const double excess = P_target - M_target * M_target / (4.0 * kPi);
  const double floor = 0.5 * kPi * 1e-24 * std::max(1.0, std::abs(P_target));
  if (excess < -1e-12 * std::max(1.0, std::abs(P_target))) {
    throw Error(ErrorKind::InvalidArgument, "P below the constant-state minimum M^2/(4 pi)");
  }
  if (excess <= floor) return constant_wave(spec, k, M_target / (2.0 * kPi), opts.N);
  TravelingWave w = newton(spec, k, M_target, P_target, Closure::Momentum, seed, opts);
  w.M_target = M_target;
  w.P_target = P_target;
  return w;
}

TravelingWave solve_wave_amplitude(const EquationSpec& spec, double k, double M_target,
                                   double amplitude, const TravelingWave& seed,
                                   const SolverOptions& opts) {
  check_common(spec, k, opts);
  if (amplitude == 0.0) return constant_wave(spec, k, M_target / (2.0 * kPi), opts.N);
  return newton(spec, k, M_target, amplitude, Closure::Amplitude, seed, opts);
}

std::vector<TravelingWave> continue_family(const EquationSpec& spec, double k, double u_bar,
                                           const std::vector<double>& amp_steps,
                                           const SolverOptions& opts) {
  check_common(spec, k, opts);
  for (std::size_t i = 1; i < amp_steps.size(); ++i) {
    if (!(amp_steps[i] > amp_steps[i - 1])) {
      throw Error(ErrorKind::InvalidArgument, "amplitude steps must be increasing");
    }
  }
  const double M = 2.0 * kPi * u_bar;
  std::vector<TravelingWave> family;
  double cur = 0.0;
  TravelingWave cur_wave = constant_wave(spec, k, u_bar, opts.N);

  for (double target : amp_steps) {
    if (target == 0.0) {
      family.push_back(constant_wave(spec, k, u_bar, opts.N));
      continue;
    }
    double step = target - cur;
    while (cur != target) {
      const double trial = std::min(cur + step, target);
      const TravelingWave seed =
          cur_wave.degenerate ? stokes_seed(spec, k, u_bar, trial, opts.N) : cur_wave;
      try {
        cur_wave = solve_wave_amplitude(spec, k, M, trial, seed, opts);
        cur = trial;
      } catch (const Error& e) {
        step *= 0.5;
        if (std::abs(step) < opts.min_step) {
          std::ostringstream os;
          os << "continuation stalled at a1 = " << cur << " heading to " << target << " (k = " << k
             << "): " << e.what();
          throw ContinuationStalled(os.str(), family);
        }
      }
    }
    family.push_back(cur_wave);
  }
  return family;
}

ParameterJacobian parameter_derivatives(const TravelingWave& wave, const SolverOptions& opts) {
  if (wave.degenerate) {
    throw Error(ErrorKind::DegenerateParametrization,
                "parameter derivatives are undefined on the constant state");
  }
  const int N = wave.N;
  GalerkinSystem sys(wave.spec, wave.k, N, opts.pad);
  RVec x(N + 3);
  x.head(N + 1) = wave.coeffs;
  x(N + 1) = wave.c;
  x(N + 2) = wave.b;
  const RMat J = sys.jacobian(x, Closure::Momentum);
  const double cond = equilibrated_condition(J);
  if (cond > opts.cond_max) {
    std::ostringstream os;
    os << "bordered system singular (condition " << cond << ") at (k=" << wave.k
       << ", M=" << wave.M_target << ", P=" << wave.P_target << ")";
    throw Error(ErrorKind::DegenerateParametrization, os.str());
  }
  RMat rhs = RMat::Zero(N + 3, 3);
  rhs.col(0) = sys.minus_dk(x);
  rhs(N + 1, 1) = 1.0;
  rhs(N + 2, 2) = 1.0;
  const Eigen::PartialPivLU<RMat> lu(J);
  RMat sol = lu.solve(rhs);
  sol += lu.solve(rhs - J * sol);

  ParameterJacobian pj;
  pj.phi_k = sol.col(0).head(N + 1);
  pj.phi_M = sol.col(1).head(N + 1);
  pj.phi_P = sol.col(2).head(N + 1);
  pj.c_k = sol(N + 1, 0);
  pj.c_M = sol(N + 1, 1);
  pj.c_P = sol(N + 1, 2);
  pj.b_k = sol(N + 2, 0);
  pj.b_M = sol(N + 2, 1);
  pj.b_P = sol(N + 2, 2);
  return pj;
}

ConservedTriple conserved_quantities(const TravelingWave& wave) {
  const RVec& a = wave.coeffs;
  ConservedTriple q;
  q.M = 2.0 * kPi * a(0);
  q.P = GalerkinSystem::momentum(a);
  double quad = 2.0 * kPi * a(0) * a(0) * phase_speed(wave.spec, 0.0, 0);
  for (int n = 1; n <= wave.N; ++n) quad += kPi * a(n) * a(n) * phase_speed(wave.spec, n * wave.k, 0);
  const int G = (wave.spec.nonlinearity.degree() + 2) * (wave.N + 1);
  const std::vector<double> phi = cosine_samples(a, G);
  double F = 0.0;
  for (double v : phi) F += wave.spec.nonlinearity.antiderivative(v);
  q.H = 2.0 * kPi * F / G + 0.5 * quad;
  return q;
}

ConservedTriple conserved_quantities_quadrature(const TravelingWave& wave) {
  const int G = (wave.spec.nonlinearity.degree() + 2) * (wave.N + 1);
  const std::vector<double> phi = cosine_samples(wave.coeffs, G);
  RVec Ka(wave.N + 1);
  for (int n = 0; n <= wave.N; ++n) Ka(n) = phase_speed(wave.spec, n * wave.k, 0) * wave.coeffs(n);
  const std::vector<double> kphi = cosine_samples(Ka, G);
  ConservedTriple q;
  double F = 0.0;
  double half = 0.0;
  for (int j = 0; j < G; ++j) {
    const auto i = static_cast<std::size_t>(j);
    q.M += phi[i];
    q.P += 0.5 * phi[i] * phi[i];
    F += wave.spec.nonlinearity.antiderivative(phi[i]);
    half += 0.5 * phi[i] * kphi[i];
  }
  const double w = 2.0 * kPi / G;
  q.M *= w;
  q.P *= w;
  q.H = w * (F + half);
  return q;
}

bool newton_quadratic(const std::vector<double>& history, double C, double floor) {
  if (history.size() < 2) return true;
  for (std::size_t i = history.size() >= 3 ? history.size() - 3 : 0; i + 1 < history.size(); ++i) {
    const double r0 = history[i];
    const double r1 = history[i + 1];
    if (r0 <= floor) continue;
    if (!(r1 <= C * r0 * r0 || r1 <= floor)) return false;
  }
  return true;
}

}  // namespace modstab
