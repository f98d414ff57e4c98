#include "modstab/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "modstab/io.hpp"
#include "modstab/sweep.hpp"

namespace modstab {

namespace {

/// Error already tagged with the (k, M, P) point it concerns.
class PointError : public Error {
 public:
  PointError(const Error& e, const std::string& point)
      : Error(e.kind(), std::string(e.what()) + " at " + point) {}
};

std::string wave_point(const TravelingWave& w) { return point_label(w.k, w.M_target, w.P_target); }

struct Context {
  std::ostream& out;
  std::ostream& err;
};

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(10);
  os << x;
  return os.str();
}

std::string fmt(cplx z) {
  std::ostringstream os;
  os.precision(10);
  os << z.real() << (z.imag() < 0 ? " - " : " + ") << std::abs(z.imag()) << "i";
  return os.str();
}

std::vector<double> parse_tau(const std::string& text) {
  if (text.empty() || text == "adaptive") return {};
  return parse_grid(text);
}

template <class F>
auto with_point(const std::string& point, F&& f) {
  try {
    return f();
  } catch (const PointError&) {
    throw;
  } catch (const Error& e) {
    throw PointError(e, point);
  }
}

int cmd_catalogue(Context& ctx) {
  ctx.out << "name               assumption1  smooth_at_0  params  formula\n";
  for (const auto& e : catalogue()) {
    std::string params;
    for (const auto& p : e.param_names) params += (params.empty() ? "" : ",") + p;
    if (params.empty()) params = "-";
    char line[256];
    std::snprintf(line, sizeof line, "%-18s %-12s %-12s %-7s %s\n", e.name.c_str(), e.assumption1 ? "yes" : "no",
                  e.smooth_at_zero ? "yes" : "no", params.c_str(), e.formula.c_str());
    ctx.out << line;
  }
  ctx.out << "custom             yes          yes          omega   Omega(q) = sum_j omega_j q^j, odd j only\n";
  return kExitOk;
}

struct SolveArgs {
  std::string config;
  std::string equation;
  std::vector<std::string> params;
  std::string nonlinearity;
  std::string omega;
  std::vector<double> k, amplitude, M, P;
  std::vector<double> u_bar;
  int N = 0;
  std::string seed;
  std::string out;
};

int cmd_solve(Context& ctx, const SolveArgs& a) {
  RunConfig cfg;
  if (!a.config.empty()) {
    cfg = load_config(a.config);
  }
  if (!a.equation.empty()) cfg.equation = a.equation;
  if (!a.omega.empty()) cfg.omega_poly = parse_grid(a.omega);
  for (const auto& kv : a.params) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw Error(ErrorKind::InvalidArgument, "--param expects name=value");
    const auto v = parse_grid(kv.substr(eq + 1));
    if (v.size() != 1) throw Error(ErrorKind::InvalidArgument, "--param expects one value");
    cfg.params[kv.substr(0, eq)] = v[0];
  }
  if (!a.nonlinearity.empty()) cfg.nonlinearity = a.nonlinearity;
  if (!a.k.empty()) cfg.k = a.k;
  if (!a.amplitude.empty()) {
    cfg.amplitude = a.amplitude;
    cfg.M.clear();
    cfg.P.clear();
  }
  if (!a.M.empty() || !a.P.empty()) {
    cfg.M = a.M;
    cfg.P = a.P;
    cfg.amplitude.clear();
  }
  if (!a.u_bar.empty()) cfg.u_bar = a.u_bar.front();
  if (a.N > 0) cfg.solver.N = a.N;
  if (!a.seed.empty()) cfg.seed_wave = a.seed;
  if (cfg.amplitude.empty() && cfg.M.empty() && cfg.P.empty()) cfg.amplitude = {0.1};
  cfg.validate();
  const auto grid = sweep_grid(cfg);
  if (grid.size() != 1) throw Error(ErrorKind::InvalidArgument, "solve needs a single (k, amplitude) or (k, M, P) point");
  const GridPoint& pt = grid.front();
  const EquationSpec spec = cfg.equation_spec();
  std::optional<TravelingWave> seed;
  if (cfg.seed_wave) seed = load_wave(*cfg.seed_wave);
  const TravelingWave wave =
      with_point(point_label(pt.k, pt.M, pt.P), [&] { return solve_point(cfg, spec, pt, seed ? &*seed : nullptr); });
  const std::filesystem::path path = a.out.empty() ? cfg.output_dir / "wave.json" : std::filesystem::path(a.out);
  persist(wave, path);
  ctx.out << "solved " << spec.name << " k=" << fmt(wave.k) << " a1=" << fmt(wave.amplitude()) << " c=" << fmt(wave.c)
          << " b=" << fmt(wave.b) << " residual=" << fmt(wave.newton_history.empty() ? 0.0 : wave.newton_history.back())
          << (wave.degenerate ? " (constant state)" : "") << " -> " << path.string() << "\n";
  return kExitOk;
}

int cmd_derivs(Context& ctx, const std::string& file, const std::string& out) {
  const TravelingWave wave = load_wave(file);
  const ParameterJacobian p = with_point(wave_point(wave), [&] { return parameter_derivatives(wave); });
  ctx.out << "c_k=" << fmt(p.c_k) << " c_M=" << fmt(p.c_M) << " c_P=" << fmt(p.c_P) << " b_k=" << fmt(p.b_k)
          << " b_M=" << fmt(p.b_M) << " b_P=" << fmt(p.b_P);
  if (!out.empty()) {
    persist(p, out);
    ctx.out << " -> " << out;
  }
  ctx.out << "\n";
  return kExitOk;
}

int cmd_kernel_check(Context& ctx, const std::string& file, double tol) {
  const TravelingWave wave = load_wave(file);
  return with_point(wave_point(wave), [&] {
    const ParameterJacobian p = parameter_derivatives(wave);
    const SimpleKernelCheck sk = check_simple_kernel(wave, p);
    const KernelBases bases = build_bases(wave, p);
    const KernelReport rep = verify_kernel_identities(wave, p, bases);
    const auto g = wave.grid();
    double phi_norm = 0.0;
    for (double x : g) phi_norm = std::max(phi_norm, std::abs(x));
    const double limit = tol * (1.0 + phi_norm);
    bool ok = sk.pass;
    ctx.out << "simple kernel: " << (sk.pass ? "pass" : "fail") << " (sigma_min/|L|=" << fmt(sk.sigma_min / sk.norm)
            << ", sigma_next/|L|=" << fmt(sk.sigma_next / sk.norm) << ", {c,b}_{M,P}=" << fmt(sk.cb_bracket) << ")\n";
    for (const auto& [name, r] : rep.residuals) {
      const bool pass = r <= limit;
      ok = ok && pass;
      ctx.out << "identity " << name << ": " << (pass ? "pass" : "fail") << " (" << fmt(r) << ")\n";
    }
    const double gram_err = (bases.gram - RMat::Identity(3, 3)).cwiseAbs().maxCoeff();
    const bool gram_ok = gram_err <= tol;
    ok = ok && gram_ok;
    ctx.out << "biorthogonality: " << (gram_ok ? "pass" : "fail") << " (|gram - I|=" << fmt(gram_err) << ")\n";
    ctx.out << "branch: " << rep.degeneracy_branch << "\n";
    ctx.out << "kernel-check: " << (ok ? "pass" : "fail") << "\n";
    return ok ? kExitOk : kExitVerificationFailed;
  });
}

int cmd_modmatrix(Context& ctx, const std::string& file, double tol, const std::string& out) {
  const TravelingWave wave = load_wave(file);
  const ModulationMatrix mm = with_point(wave_point(wave), [&] {
    return assemble_modulation_matrix(wave, parameter_derivatives(wave), tol);
  });
  ctx.out << "D =\n";
  for (int i = 0; i < 3; ++i) {
    ctx.out << " ";
    for (int j = 0; j < 3; ++j) ctx.out << " " << fmt(mm.D(i, j));
    ctx.out << "\n";
  }
  ctx.out << "speeds:";
  for (const auto& s : mm.speeds) ctx.out << "  " << fmt(s);
  ctx.out << "\nclassification: " << to_string(mm.classification) << "\n";
  if (!out.empty()) persist(mm.D, out);
  return mm.classification == Classification::Marginal ? kExitIndeterminate : kExitOk;
}

int cmd_bloch(Context& ctx, const std::string& file, const std::string& tau_text, const std::string& out) {
  const TravelingWave wave = load_wave(file);
  const std::vector<double> tau = parse_tau(tau_text);
  std::ostringstream csv;
  csv << "tau,re_lambda1,re_lambda2,re_lambda3,im_lambda1,im_lambda2,im_lambda3,re_s1,re_s2,re_s3,im_s1,im_s2,im_s3\n";
  with_point(wave_point(wave), [&] {
    const ParameterJacobian p = parameter_derivatives(wave);
    const KernelBases bases = build_bases(wave, p);
    std::vector<double> taus;
    std::vector<Speeds> lambdas;
    if (tau.empty() || tau.size() >= 3) {
      const BranchSlopes bs = branch_slopes(wave, p, bases, tau);
      taus = bs.tau;
      lambdas = bs.lambdas;
    } else {
      for (double t : tau) {
        const auto pairs = spectrum_near_origin(assemble_bloch(wave, t, BlochForm::Exact), -1.0, 0.0, 3);
        if (pairs.size() < 3) throw Error(ErrorKind::Numeric, "fewer than three eigenvalues near the origin");
        Speeds l{};
        for (std::size_t j = 0; j < 3; ++j) l[j] = pairs[j].value;
        taus.push_back(t);
        lambdas.push_back(l);
      }
    }
    for (std::size_t i = 0; i < taus.size(); ++i) {
      const cplx ikt(0.0, wave.k * taus[i]);
      csv << format_double(taus[i]);
      for (const auto& l : lambdas[i]) csv << ',' << format_double(l.real());
      for (const auto& l : lambdas[i]) csv << ',' << format_double(l.imag());
      for (const auto& l : lambdas[i]) csv << ',' << format_double((l / ikt).real());
      for (const auto& l : lambdas[i]) csv << ',' << format_double((l / ikt).imag());
      csv << '\n';
    }
    return 0;
  });
  if (out.empty()) {
    ctx.out << csv.str();
  } else {
    std::ofstream f(out, std::ios::binary);
    if (!f) throw Error(ErrorKind::InvalidArgument, "cannot write " + out);
    f << csv.str();
    ctx.out << "bloch: " << tau.size() << " tau values -> " << out << "\n";
  }
  return kExitOk;
}

int cmd_verify(Context& ctx, const std::string& file, double tol, const std::string& tau_text, const std::string& out) {
  const TravelingWave wave = load_wave(file);
  return with_point(wave_point(wave), [&] {
    const ParameterJacobian p = parameter_derivatives(wave);
    const KernelBases bases = build_bases(wave, p);
    const KernelReport kr = verify_kernel_identities(wave, p, bases);
    const auto g = wave.grid();
    double phi_norm = 0.0;
    for (double x : g) phi_norm = std::max(phi_norm, std::abs(x));
    const double kernel_limit = 1e-7 * (1.0 + phi_norm);
    const bool kernel_ok = kr.max_residual() <= kernel_limit;
    const double gram_err = (bases.gram - RMat::Identity(3, 3)).cwiseAbs().maxCoeff();
    const bool gram_ok = gram_err <= 1e-7;
    const ConnectionReport conn = verify_connection(wave, p, bases, tol);
    VerdictOptions vo;
    vo.tau_list = parse_tau(tau_text);
    const Verdict v = modulational_verdict(wave, p, bases, vo);

    Report rep;
    rep.kind = "verify";
    rep.values["kernel_max_residual"] = kr.max_residual();
    rep.values["gram_error"] = gram_err;
    rep.values["connection_error"] = conn.max_entry_error;
    rep.values["slope_error"] = v.slopes.extrapolated_error;
    rep.values["spectral_max_growth"] = v.spectral_max_growth;
    rep.values["growth_constant"] = v.growth_constant;
    rep.labels["classification"] = to_string(v.classification);
    rep.labels["consistent"] = to_string(v.consistent);
    rep.labels["connection"] = conn.pass ? "pass" : "fail";

    ctx.out << "wave: " << wave.spec.name << " " << wave_point(wave) << " a1=" << fmt(wave.amplitude())
            << " c=" << fmt(wave.c) << "\n";
    ctx.out << "kernel identities: " << (kernel_ok ? "pass" : "fail") << " (max residual " << fmt(kr.max_residual())
            << ")\n";
    ctx.out << "biorthogonality: " << (gram_ok ? "pass" : "fail") << " (|gram - I| = " << fmt(gram_err) << ")\n";
    ctx.out << "connection: " << (conn.pass ? "pass" : "fail") << " (max relative entry error "
            << fmt(conn.max_entry_error) << " at (" << conn.worst_row + 1 << "," << conn.worst_col + 1 << "))\n";
    ctx.out << "slopes: extrapolated error " << fmt(v.slopes.extrapolated_error) << ", observed order "
            << fmt(v.slopes.observed_order) << (v.slopes.ambiguous ? ", ambiguous matching" : "") << "\n";
    ctx.out << "classification: " << to_string(v.classification) << "\n";
    ctx.out << "verdict: consistent=" << to_string(v.consistent) << " max Re lambda=" << fmt(v.spectral_max_growth)
            << " C=" << fmt(v.growth_constant) << "\n";
    if (!out.empty()) persist(rep, out);

    if (!(kernel_ok && gram_ok && conn.pass) || v.consistent == Consistency::Inconsistent) {
      return kExitVerificationFailed;
    }
    return v.consistent == Consistency::Indeterminate ? kExitIndeterminate : kExitOk;
  });
}

int cmd_sweep(Context& ctx, const std::string& config, bool resume, int threads) {
  const RunConfig cfg = load_config(config);
  SweepOptions so;
  so.csv = cfg.output_dir / "sweep.csv";
  so.resume = resume;
  so.threads = threads;
  const SweepResult res = sweep_stability_diagram(cfg, so);
  std::size_t failed = 0;
  for (const auto& r : res.rows) failed += r.failure.empty() ? 0 : 1;
  std::ostringstream summary;
  summary << "# boundary brackets along k\n";
  summary << "slice,amplitude,M,P,from,to,k_lo,k_hi,k_star,refined\n";
  for (const auto& b : res.boundaries) {
    summary << b.slice << ',' << format_double(b.amplitude) << ',' << format_double(b.M) << ','
            << format_double(b.P) << ',' << to_string(b.from) << ',' << to_string(b.to) << ','
            << format_double(b.k_lo) << ',' << format_double(b.k_hi) << ',' << format_double(b.k_star()) << ','
            << (b.refined ? "true" : "false") << '\n';
  }
  std::ofstream bf(cfg.output_dir / "boundary.csv", std::ios::binary | std::ios::trunc);
  bf << summary.str();
  ctx.out << "sweep: " << res.rows.size() << " points (" << res.resumed << " resumed, " << failed << " failed), "
          << res.boundaries.size() << " boundaries";
  for (const auto& b : res.boundaries) ctx.out << "; k* in [" << fmt(b.k_lo) << ", " << fmt(b.k_hi) << "]";
  ctx.out << " -> " << so.csv->string() << "\n";
  return kExitOk;
}

}  // namespace

int exit_code(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidArgument:
    case ErrorKind::Parse:
    case ErrorKind::UnsupportedSymbol:
      return kExitUsage;
    default:
      return kExitNumeric;
  }
}

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Context ctx{out, err};
  CLI::App app{"Modulational stability of periodic waves of generalized Whitham equations", "modstab"};
  app.require_subcommand(1);

  auto* catalogue_cmd = app.add_subcommand("catalogue", "List built-in dispersion symbols");

  SolveArgs sa;
  auto* solve = app.add_subcommand("solve", "Solve for a traveling wave and write it as JSON");
  solve->add_option("--config", sa.config, "INI config file")->check(CLI::ExistingFile);
  solve->add_option("--equation", sa.equation, "Catalogue name or custom");
  solve->add_option("--param", sa.params, "Symbol parameter name=value");
  solve->add_option("--omega", sa.omega, "Custom Omega coefficients c0, c1, ...");
  solve->add_option("--nonlinearity", sa.nonlinearity, "quadratic, cubic or power-p");
  solve->add_option("--k", sa.k, "Wavenumber")->expected(1);
  solve->add_option("--amplitude", sa.amplitude, "First cosine coefficient")->expected(1);
  solve->add_option("--u-bar", sa.u_bar, "Mean of the constant state")->expected(1);
  solve->add_option("--M", sa.M, "Mass target")->expected(1);
  solve->add_option("--P", sa.P, "Momentum target")->expected(1);
  solve->add_option("--N", sa.N, "Cosine truncation")->check(CLI::Range(16, 4096));
  solve->add_option("--seed", sa.seed, "Seed wave file")->check(CLI::ExistingFile);
  solve->add_option("-o,--out", sa.out, "Output wave file");

  std::string wavefile;
  std::string outfile;
  double tol = 1e-6;
  std::string tau_text;

  auto* derivs = app.add_subcommand("derivs", "Parameter derivatives of a wave");
  derivs->add_option("wavefile", wavefile)->required()->check(CLI::ExistingFile);
  derivs->add_option("-o,--out", outfile, "Output jacobian file");

  auto* kcheck = app.add_subcommand("kernel-check", "Simple kernel and kernel identities");
  kcheck->add_option("wavefile", wavefile)->required()->check(CLI::ExistingFile);
  double kernel_tol = 1e-7;
  kcheck->add_option("--tol", kernel_tol, "Residual tolerance relative to 1+|phi|");

  auto* modm = app.add_subcommand("modmatrix", "Modulation matrix, characteristic speeds, classification");
  modm->add_option("wavefile", wavefile)->required()->check(CLI::ExistingFile);
  modm->add_option("--tol", tol, "Classification tolerance");
  modm->add_option("-o,--out", outfile, "Output matrix file");

  auto* bloch = app.add_subcommand("bloch", "Eigenvalues of the Bloch operator near the origin as CSV");
  bloch->add_option("wavefile", wavefile)->required()->check(CLI::ExistingFile);
  bloch->add_option("--tau", tau_text, "Comma list, start:stop:step or adaptive");
  bloch->add_option("-o,--out", outfile, "Output CSV file");

  auto* verify = app.add_subcommand("verify", "Connection, kernel and stability report");
  verify->add_option("wavefile", wavefile)->required()->check(CLI::ExistingFile);
  verify->add_option("--tol", tol, "Connection tolerance");
  verify->add_option("--tau", tau_text, "Comma list, start:stop:step or adaptive");
  verify->add_option("-o,--out", outfile, "Output report file");

  std::string config;
  bool resume = false;
  int threads = 0;
  auto* sweep = app.add_subcommand("sweep", "Stability diagram over a parameter grid");
  sweep->add_option("--config", config, "INI config file")->required()->check(CLI::ExistingFile);
  sweep->add_flag("--resume", resume, "Skip rows already in the CSV");
  sweep->add_option("--threads", threads, "Worker count (default MODSTAB_THREADS or all cores)")
      ->check(CLI::PositiveNumber);

  std::vector<std::string> storage;
  storage.reserve(args.size() + 1);
  storage.emplace_back("modstab");
  storage.insert(storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : storage) argv.push_back(s.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (catalogue_cmd->parsed()) return cmd_catalogue(ctx);
    if (solve->parsed()) return cmd_solve(ctx, sa);
    if (derivs->parsed()) return cmd_derivs(ctx, wavefile, outfile);
    if (kcheck->parsed()) return cmd_kernel_check(ctx, wavefile, kernel_tol);
    if (modm->parsed()) return cmd_modmatrix(ctx, wavefile, tol, outfile);
    if (bloch->parsed()) return cmd_bloch(ctx, wavefile, tau_text, outfile);
    if (verify->parsed()) return cmd_verify(ctx, wavefile, tol, tau_text, outfile);
    if (sweep->parsed()) return cmd_sweep(ctx, config, resume, threads);
  } catch (const Error& e) {
    err << "modstab: " << to_string(e.kind()) << ": " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    err << "modstab: internal error: " << e.what() << "\n";
    return kExitNumeric;
  }
  return kExitUsage;
}

int run_command(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run_command(args, std::cout, std::cerr);
}

}  // namespace modstab
