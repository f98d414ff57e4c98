// Acceptance checks, one PASS/FAIL line per criterion. Exit status is the number of failures.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "modstab/sweep.hpp"
#include "support/suite.hpp"

using namespace modstab;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = true;
  std::string detail;
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

const std::vector<oracle::SuiteWave>& suite() {
  static const std::vector<oracle::SuiteWave> s = oracle::acceptance_suite();
  return s;
}

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

Outcome biorthogonality() {
  const auto t0 = Clock::now();
  double worst = 0.0;
  for (const auto& name : oracle::suite_equations()) {
    for (double k : {0.75, 1.25}) {
      for (double a : {0.05, 0.1}) {
        const auto w = oracle::family_wave(name, k, a);
        const auto b = build_bases(w, parameter_derivatives(w));
        worst = std::max(worst, (b.gram - RMat::Identity(3, 3)).cwiseAbs().maxCoeff());
      }
    }
  }
  const double t = seconds_since(t0);
  return {worst <= 1e-7 && t <= 30.0, "max |gram - I| = " + fmt("%.2e", worst) + ", " + fmt("%.1f", t) + " s"};
}

Outcome kernel_identities() {
  double worst = 0.0;
  std::string where;
  for (const auto& s : suite()) {
    const auto rep = verify_kernel_identities(s.wave, s.pjac, s.bases);
    const double scale = 1.0 + s.wave.series().sup_norm(256);
    for (const auto& [key, value] : rep.residuals) {
      if (value / scale > worst) {
        worst = value / scale;
        where = s.label + " " + key;
      }
    }
  }
  return {worst <= 1e-7, "max residual/(1+|phi|) = " + fmt("%.2e", worst) + " (" + where + ")"};
}

Outcome connection() {
  double worst = 0.0;
  std::string where;
  bool pass = true;
  for (const auto& s : suite()) {
    const auto rep = verify_connection(s.wave, s.pjac, s.bases, 1e-6);
    pass = pass && rep.pass;
    if (rep.max_entry_error >= worst) {
      worst = rep.max_entry_error;
      where = s.label;
    }
  }
  return {pass && worst <= 1e-6, "max relative entry error = " + fmt("%.2e", worst) + " (" + where + ")"};
}

Outcome taylor_order() {
  double lo = 1e300;
  double hi = 0.0;
  for (const auto& s : suite()) {
    const double r = taylor_remainder(s.wave, 1e-2) / taylor_remainder(s.wave, 5e-3);
    lo = std::min(lo, r);
    hi = std::max(hi, r);
  }
  return {lo >= 6.4 && hi <= 9.6, "remainder ratio in [" + fmt("%.3f", lo) + ", " + fmt("%.3f", hi) + "]"};
}

Outcome slope_convergence() {
  double worst = 0.0;
  double order = 1e300;
  bool decreasing = true;
  for (const auto& s : suite()) {
    const auto bs = branch_slopes(s.wave, s.pjac, s.bases, {});
    worst = std::max(worst, bs.extrapolated_error);
    order = std::min(order, bs.observed_order);
    for (std::size_t i = 1; i < bs.errors.size(); ++i) decreasing = decreasing && bs.errors[i] < bs.errors[i - 1];
  }
  return {worst <= 1e-4 && decreasing && order >= 0.8,
          "max extrapolated error = " + fmt("%.2e", worst) + ", min observed order = " + fmt("%.2f", order)};
}

Outcome constant_state() {
  double worst = 0.0;
  double worst_re = 0.0;
  const double u = 0.3;
  for (const auto& name : oracle::suite_equations()) {
    for (double k : {0.75, 1.25}) {
      const auto spec = make_equation(name);
      const auto w = continue_family(spec, k, u, {0.0}).back();
      for (double tau : {0.0, 0.01, 0.25, -0.4}) {
        const auto op = assemble_bloch(w, tau, BlochForm::Exact);
        const int N = w.N;
        const double fprime = spec.nonlinearity.eval(u, 1);
        for (int m = -N; m <= N; ++m) {
          for (int n = -N; n <= N; ++n) {
            cplx expect{};
            if (m == n) {
              const double q = k * (n + tau);
              expect = cplx(0.0, q * (w.c - fprime) - omega_eval(spec, q, 0));
            }
            worst = std::max(worst, std::abs(op.matrix(m + N, n + N) - expect) / std::max(1.0, std::abs(expect)));
          }
        }
        const double scale = op.matrix.cwiseAbs().maxCoeff();
        for (const auto& lam : full_spectrum(op)) worst_re = std::max(worst_re, std::abs(lam.real()) / scale);
      }
    }
  }
  return {worst <= 1e-12 && worst_re <= 1e-12,
          "max entry error/max(1, |entry|) = " + fmt("%.2e", worst) + ", max |Re lambda|/|A| = " + fmt("%.2e", worst_re)};
}

Outcome hamiltonian_symmetry() {
  double worst = 0.0;
  bool pass = true;
  for (const auto& s : suite()) {
    for (double tau : {0.05, 0.1}) {
      const auto rep = symmetry_check(s.wave, tau, 1e-8);
      pass = pass && rep.hamiltonian_distance <= 1e-8 * rep.norm;
      worst = std::max(worst, rep.hamiltonian_distance / rep.norm);
    }
  }
  return {pass, "max Hausdorff distance/|A| = " + fmt("%.2e", worst)};
}

Outcome consistency_sweep() {
  const auto t0 = Clock::now();
  const double k_oracle = oracle::whitham_threshold();
  auto cfg = parse_config(
      "[equation]\nname = whitham\n[wave]\nk = 0.8:1.6:0.02\namplitude = 0.01\n[bloch]\ndepth = rigorous\n",
      "acceptance");
  const auto res = sweep_stability_diagram(cfg);
  int elliptic = 0, strict = 0, bad = 0, failed = 0, other = 0;
  std::ostringstream issues;
  for (const auto& r : res.rows) {
    if (!r.failure.empty() || !r.classified) {
      ++failed;
      issues << " failure at k=" << r.k << ": " << r.failure << ";";
      continue;
    }
    if (r.classification == Classification::Elliptic) {
      ++elliptic;
    } else if (r.classification == Classification::StrictlyHyperbolic) {
      ++strict;
    } else {
      ++other;
      continue;
    }
    if (r.consistent != "true") {
      ++bad;
      issues << " k=" << r.k << " " << to_string(r.classification) << " consistent=" << r.consistent << ";";
    }
  }
  const double t = seconds_since(t0);
  bool boundary_ok = res.boundaries.size() == 1;
  double k_star = std::nan("");
  if (boundary_ok) {
    k_star = res.boundaries[0].k_star();
    boundary_ok = std::abs(k_star - k_oracle) <= 0.02;
  }
  std::ostringstream d;
  d << elliptic << " elliptic, " << strict << " strict, " << other << " marginal/weak, " << bad
    << " inconsistent, " << failed << " failed; boundaries " << res.boundaries.size() << ", k* = " << k_star
    << " vs oracle " << k_oracle << "; " << fmt("%.0f", t) << " s" << issues.str();
  return {bad == 0 && failed == 0 && elliptic > 0 && strict > 0 && boundary_ok && t <= 300.0, d.str()};
}

Outcome solver_health() {
  bool quadratic = true;
  std::size_t solves = 0;
  double worst = 0.0;
  std::string where;
  for (const auto& name : oracle::suite_equations()) {
    for (double k : {0.75, 1.25}) {
      const auto family = continue_family(make_equation(name), k, 0.0, {0.05, 0.1});
      for (const auto& w : family) {
        if (w.degenerate) continue;
        ++solves;
        quadratic = quadratic && newton_quadratic(w.newton_history);
      }
      SolverOptions fine;
      fine.N = 128;
      const auto doubled = continue_family(make_equation(name), k, 0.0, {0.05, 0.1}, fine);
      for (std::size_t i = 0; i < family.size(); ++i) {
        const auto& a = family[i];
        const auto& b = doubled[i];
        if (a.degenerate) continue;
        quadratic = quadratic && newton_quadratic(b.newton_history);
        std::vector<double> rel = {std::abs(a.c - b.c) / std::abs(b.c), std::abs(a.b - b.b) / std::max(std::abs(b.b), 1e-300)};
        const auto sa = assemble_modulation_matrix(a, parameter_derivatives(a)).speeds;
        const auto sb = assemble_modulation_matrix(b, parameter_derivatives(b, fine)).speeds;
        for (std::size_t j = 0; j < 3; ++j) rel.push_back(std::abs(sa[j] - sb[j]) / std::abs(sb[j]));
        const double m = *std::max_element(rel.begin(), rel.end());
        if (m > worst) {
          worst = m;
          where = name + " k=" + fmt("%.2f", k) + " a=" + fmt("%.2f", a.amplitude());
        }
      }
    }
  }
  return {quadratic && worst <= 1e-8, std::to_string(solves) + " solves, quadratic = " + (quadratic ? "yes" : "no") +
                                          ", max relative change under doubling = " + fmt("%.2e", worst) + " (" +
                                          where + ")"};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"1 biorthogonality", biorthogonality},
      {"2 kernel identities", kernel_identities},
      {"3 connection D = Dhat0 - cI", connection},
      {"4 Taylor remainder order", taylor_order},
      {"5 branch-slope convergence", slope_convergence},
      {"6 constant-state oracle", constant_state},
      {"7 Hamiltonian symmetry", hamiltonian_symmetry},
      {"8 consistency sweep", consistency_sweep},
      {"9 solver health", solver_health},
  };
  int failures = 0;
  for (const auto& [name, check] : criteria) {
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    failures += o.pass ? 0 : 1;
    std::printf("%s  %s: %s\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
    std::fflush(stdout);
  }
  return failures;
}
