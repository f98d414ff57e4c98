#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "modstab/cli.hpp"
#include "modstab/io.hpp"
#include "modstab/sweep.hpp"
#include "support/suite.hpp"

using namespace modstab;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("modstab_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write(const fs::path& p, const std::string& text) {
  std::ofstream out(p);
  out << text;
}

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run_command(args, out, err);
  return {code, out.str(), err.str()};
}

ErrorKind parse_kind(const std::string& text, std::string* message = nullptr) {
  try {
    parse_config(text, "t.ini");
  } catch (const Error& e) {
    if (message) *message = e.what();
    return e.kind();
  }
  ADD_FAILURE() << "config accepted:\n" << text;
  return ErrorKind::Numeric;
}

}  // namespace

TEST(Config, ParsesAllSections) {
  const auto cfg = parse_config(
      "[equation]\nname = ilw\ndelta = 2\n"
      "[nonlinearity]\nname = cubic\n"
      "[wave]\nk = 0.5:1.0:0.25\namplitude = 0.05, 0.1\nu_bar = 0.2\nN = 48\n"
      "[tolerances]\nnewton = 1e-10\nconnection = 1e-5\nclassification = 1e-7\n"
      "[bloch]\ntau = 0.01, 0.005, 0.0025\ndepth = rigorous\n"
      "[sweep]\ncontinuation_step = 0.02\nbisect = false\n"
      "[output]\ndirectory = results\n");
  EXPECT_EQ(cfg.equation, "ilw");
  EXPECT_EQ(cfg.params.at("delta"), 2.0);
  EXPECT_EQ(cfg.nonlinearity, "cubic");
  ASSERT_EQ(cfg.k.size(), 3u);
  EXPECT_DOUBLE_EQ(cfg.k[2], 1.0);
  EXPECT_EQ(cfg.amplitude, (std::vector<double>{0.05, 0.1}));
  EXPECT_EQ(cfg.u_bar, 0.2);
  EXPECT_EQ(cfg.solver.N, 48);
  EXPECT_EQ(cfg.solver.tol_newton, 1e-10);
  EXPECT_EQ(cfg.tol_connection, 1e-5);
  EXPECT_EQ(cfg.tol_classification, 1e-7);
  EXPECT_EQ(cfg.tau_list.size(), 3u);
  EXPECT_EQ(cfg.depth, Depth::Rigorous);
  EXPECT_EQ(cfg.continuation_step, 0.02);
  EXPECT_FALSE(cfg.bisect);
  EXPECT_EQ(cfg.output_dir, fs::path("results"));
  EXPECT_EQ(cfg.equation_spec().params.at("delta"), 2.0);

  const auto adaptive = parse_config("[wave]\nM = 0.1\nP = 0.2\n[bloch]\ntau = adaptive\n");
  EXPECT_TRUE(adaptive.tau_list.empty());
  EXPECT_FALSE(adaptive.uses_amplitude());

  const auto commented = parse_config("; header\n[wave]\nk = 1.5   ; wavenumber\namplitude = 0.1 # first mode\n");
  EXPECT_EQ(commented.k, std::vector<double>{1.5});
  EXPECT_EQ(commented.amplitude, std::vector<double>{0.1});
}

TEST(Config, RejectsBadInput) {
  std::string msg;
  EXPECT_EQ(parse_kind("[wave]\nk = 1\namplitude = 0.1\nwavelength = 3\n", &msg), ErrorKind::Parse);
  EXPECT_NE(msg.find("wavelength"), std::string::npos) << msg;
  EXPECT_NE(msg.find("t.ini"), std::string::npos) << msg;
  EXPECT_EQ(parse_kind("[waves]\nk = 1\n", &msg), ErrorKind::Parse);
  EXPECT_NE(msg.find("waves"), std::string::npos) << msg;
  EXPECT_EQ(parse_kind("[wave]\nk = 1\namplitude = 0.1\n[tolerances]\nnewton = -1\n"), ErrorKind::Parse);
  EXPECT_EQ(parse_kind("[wave]\nk = 1\namplitude = 0.1\nN = 8\n"), ErrorKind::Parse);
  EXPECT_EQ(parse_kind("[wave]\nk = 1\nM = 0.1\n"), ErrorKind::Parse);
  EXPECT_EQ(parse_kind("[wave]\nk = 1\namplitude = 0.1\n[bloch]\ntau = 0.5, 0.2, 0.1\n"), ErrorKind::Parse);
  EXPECT_EQ(parse_kind("[wave]\nk = 1\namplitude = 0.1\n[bloch]\ndepth = deep\n"), ErrorKind::Parse);
  EXPECT_EQ(parse_kind("[wave]\nk = abc\namplitude = 0.1\n"), ErrorKind::Parse);
  EXPECT_THROW(load_config("/nonexistent/modstab.ini"), Error);
}

TEST(Config, Grids) {
  EXPECT_EQ(parse_grid("1.5"), std::vector<double>{1.5});
  EXPECT_EQ(parse_grid("1, 2,3"), (std::vector<double>{1, 2, 3}));
  const auto g = parse_grid("0.5:2:0.25");
  ASSERT_EQ(g.size(), 7u);
  EXPECT_DOUBLE_EQ(g.back(), 2.0);
  EXPECT_TRUE(parse_grid("2:1:0.1").empty());
  EXPECT_THROW(parse_grid("0:1:0"), Error);
  EXPECT_THROW(parse_grid("1,,2"), Error);
  EXPECT_EQ(depth_from_string(to_string(Depth::Rigorous)), Depth::Rigorous);
}

TEST(Sweep, CsvLineRoundTrip) {
  SweepRow r;
  r.k = 1.25;
  r.amplitude = 0.1;
  r.M = 0.0;
  r.P = 0.0157;
  r.c = 0.93;
  r.speeds = {cplx(-1.0), cplx(-0.2, 0.01), cplx(-0.2, -0.01)};
  r.classified = true;
  r.classification = Classification::Elliptic;
  r.max_re_lambda = std::nan("");
  r.consistent = "";
  const auto back = sweep_row_from_csv(sweep_csv_line(r));
  EXPECT_EQ(back.k, r.k);
  EXPECT_EQ(back.speeds[1], r.speeds[1]);
  EXPECT_EQ(back.classification, r.classification);
  EXPECT_TRUE(std::isnan(back.max_re_lambda));
  EXPECT_EQ(sweep_csv_line(back), sweep_csv_line(r));
  EXPECT_EQ(sweep_csv_header(),
            "k,amplitude,M,P,c,re_mu1,re_mu2,re_mu3,im_mu1,im_mu2,im_mu3,class,max_re_lambda,consistent,failure");
}

TEST(Sweep, KdvIsStrictlyHyperbolicEverywhere) {
  const auto dir = scratch("kdv");
  auto cfg = parse_config("[equation]\nname = kdv\n[wave]\nk = 0.5:2:0.25\namplitude = 0.1, 0.2\n");
  cfg.output_dir = dir;
  const auto res = sweep_stability_diagram(cfg, {.csv = dir / "sweep.csv", .resume = false, .threads = 1});
  ASSERT_EQ(res.rows.size(), 14u);
  for (const auto& r : res.rows) {
    EXPECT_TRUE(r.failure.empty()) << r.failure;
    EXPECT_EQ(r.classification, Classification::StrictlyHyperbolic) << r.k << " " << r.amplitude;
  }
  EXPECT_TRUE(res.boundaries.empty());
  std::istringstream csv(slurp(dir / "sweep.csv"));
  std::string line;
  std::getline(csv, line);
  EXPECT_EQ(line, sweep_csv_header());
  std::size_t n = 0;
  while (std::getline(csv, line)) ++n;
  EXPECT_EQ(n, 14u);
}

TEST(Sweep, ThreadCountAndResumeDoNotChangeOutput) {
  const auto dir = scratch("det");
  auto cfg = parse_config("[equation]\nname = whitham\n[wave]\nk = 1.0:1.3:0.05\namplitude = 0.02, 0.05\n");
  sweep_stability_diagram(cfg, {.csv = dir / "one.csv", .resume = false, .threads = 1});
  sweep_stability_diagram(cfg, {.csv = dir / "three.csv", .resume = false, .threads = 3});
  const std::string reference = slurp(dir / "one.csv");
  EXPECT_EQ(slurp(dir / "three.csv"), reference);

  // Keep the header, four complete rows and a torn fifth.
  std::istringstream in(reference);
  std::string line, partial;
  for (int i = 0; i < 5 && std::getline(in, line); ++i) partial += line + "\n";
  std::getline(in, line);
  partial += line.substr(0, line.size() / 2);
  write(dir / "resume.csv", partial);
  const auto res = sweep_stability_diagram(cfg, {.csv = dir / "resume.csv", .resume = true, .threads = 2});
  EXPECT_EQ(res.resumed, 4u);
  EXPECT_EQ(slurp(dir / "resume.csv"), reference);

  auto other = cfg;
  other.k = {0.7, 0.8};
  EXPECT_THROW(sweep_stability_diagram(other, {.csv = dir / "resume.csv", .resume = true, .threads = 1}), Error);
}

TEST(Sweep, WhithamBoundaryNearNlsThreshold) {
  const double k_star = oracle::whitham_threshold();
  auto cfg = parse_config("[equation]\nname = whitham\n[wave]\nk = 1.0:1.3:0.02\namplitude = 0.01\n");
  const auto res = sweep_stability_diagram(cfg, {.threads = 1});
  ASSERT_EQ(res.boundaries.size(), 1u);
  const auto& b = res.boundaries[0];
  EXPECT_TRUE(b.refined);
  EXPECT_LE(b.k_hi - b.k_lo, 0.02);
  EXPECT_NEAR(b.k_star(), k_star, 0.02);
  EXPECT_EQ(b.from, Classification::StrictlyHyperbolic);
  EXPECT_EQ(b.to, Classification::Elliptic);
}

TEST(Sweep, FailedPointsAreRecorded) {
  auto cfg = parse_config("[equation]\nname = kdv\n[wave]\nk = 1\nM = 0.0\nP = -1.0\n");
  const auto res = sweep_stability_diagram(cfg, {.threads = 1});
  ASSERT_EQ(res.rows.size(), 1u);
  EXPECT_FALSE(res.rows[0].classified);
  EXPECT_NE(res.rows[0].failure.find("k=1"), std::string::npos) << res.rows[0].failure;
}

TEST(Cli, Catalogue) {
  const auto r = run({"catalogue"});
  EXPECT_EQ(r.code, 0);
  for (const auto& name : oracle::suite_equations()) EXPECT_NE(r.out.find(name), std::string::npos) << name;
  EXPECT_NE(r.out.find("custom"), std::string::npos);
}

TEST(Cli, SolveThenVerify) {
  const auto dir = scratch("solve");
  const auto wave = (dir / "wave.json").string();
  auto r = run({"solve", "--equation", "kdv", "--k", "1", "--amplitude", "0.1", "-o", wave});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto w = load_wave(wave);
  const auto direct = oracle::family_wave("kdv", 1.0, 0.1);
  EXPECT_NEAR(w.c, direct.c, 1e-12);
  EXPECT_EQ(wave_to_text(load_wave(wave)), slurp(wave));

  r = run({"verify", wave});
  EXPECT_EQ(r.code, 0) << r.out << r.err;
  EXPECT_NE(r.out.find("connection: pass"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("consistent=true"), std::string::npos) << r.out;

  r = run({"kernel-check", wave});
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("kernel-check: pass"), std::string::npos);

  const auto mat = (dir / "D.json").string();
  r = run({"modmatrix", wave, "-o", mat});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(load_matrix(mat).rows(), 3);

  const auto csv = (dir / "bloch.csv").string();
  r = run({"bloch", wave, "--tau", "0.01,0.005,0.0025", "-o", csv});
  EXPECT_EQ(r.code, 0) << r.err;
  std::istringstream lines(slurp(csv));
  std::string line;
  std::size_t n = 0;
  while (std::getline(lines, line)) ++n;
  EXPECT_EQ(n, 4u);

  r = run({"derivs", wave, "-o", (dir / "jac.json").string()});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(load_jacobian(dir / "jac.json").phi_k.size(), 65);
}

TEST(Cli, ExitCodes) {
  const auto dir = scratch("codes");
  const auto wave = dir / "wave.json";
  persist(oracle::family_wave("kdv", 1.0, 0.05), wave);
  auto text = slurp(wave);
  text.replace(text.find("\"version\": 1"), 12, "\"version\": 7");
  write(dir / "future.json", text);
  auto r = run({"verify", (dir / "future.json").string()});
  EXPECT_EQ(r.code, kExitNumeric);
  EXPECT_NE(r.err.find("version"), std::string::npos) << r.err;

  write(dir / "empty.ini", "[equation]\nname = kdv\n[wave]\nk = 2:1:0.1\namplitude = 0.1\n");
  EXPECT_EQ(run({"sweep", "--config", (dir / "empty.ini").string()}).code, kExitUsage);
  EXPECT_EQ(run({"frobnicate"}).code, kExitUsage);
  EXPECT_EQ(run({"solve", "--k", "nope"}).code, kExitUsage);
  r = run({"solve", "--equation", "burgers", "--k", "1", "-o", (dir / "b.json").string()});
  EXPECT_EQ(r.code, kExitNumeric);
  EXPECT_NE(r.err.find("k=1"), std::string::npos) << r.err;
  EXPECT_EQ(exit_code(ErrorKind::ConvergenceFailure), kExitNumeric);
  EXPECT_EQ(exit_code(ErrorKind::UnsupportedSymbol), kExitUsage);
}

TEST(Cli, SweepWritesOutputs) {
  const auto dir = scratch("sweep");
  write(dir / "s.ini", "[equation]\nname = whitham\n[wave]\nk = 1.1, 1.2\namplitude = 0.01\n[output]\ndirectory = " +
                           (dir / "out").string() + "\n");
  const auto r = run({"sweep", "--config", (dir / "s.ini").string(), "--threads", "1"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(fs::exists(dir / "out" / "sweep.csv"));
  EXPECT_TRUE(fs::exists(dir / "out" / "boundary.csv"));
}
