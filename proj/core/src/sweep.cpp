#include "modstab/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <condition_variable>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <mutex>
#include <numbers>
#include <sstream>
#include <thread>

#include "modstab/io.hpp"

namespace modstab {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string field(double x) { return std::isnan(x) ? std::string() : format_double(x); }

double number_or_nan(const std::string& s) {
  if (s.empty()) return kNaN;
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw Error(ErrorKind::Parse, "sweep CSV: bad number '" + s + "'");
  }
  if (used != s.size()) throw Error(ErrorKind::Parse, "sweep CSV: bad number '" + s + "'");
  return v;
}

std::string sanitize(std::string s) {
  for (char& ch : s) {
    if (ch == ',' || ch == '\n' || ch == '\r') ch = ch == ',' ? ';' : ' ';
  }
  return s;
}

bool hyperbolic(Classification c) {
  return c == Classification::StrictlyHyperbolic || c == Classification::WeaklyHyperbolic;
}

bool definite(const SweepRow& r) {
  return r.classified && r.classification != Classification::Marginal;
}

std::vector<double> amplitude_steps(double target, double step) {
  if (target <= 0.0) return {0.0};
  const auto n = static_cast<int>(std::ceil(target / step - 1e-12));
  std::vector<double> out;
  for (int i = 1; i <= n; ++i) out.push_back(target * i / n);
  return out;
}

}  // namespace

int sweep_threads() {
  int n = static_cast<int>(std::thread::hardware_concurrency());
  if (n < 1) n = 1;
  if (const char* env = std::getenv("MODSTAB_THREADS")) {
    char* end = nullptr;
    const long cap = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && cap >= 1) n = static_cast<int>(std::min<long>(n, cap));
  }
  return n;
}

std::string point_label(double k, double M, double P) {
  return "(k=" + format_double(k) + ", M=" + format_double(M) + ", P=" + format_double(P) + ")";
}

std::vector<GridPoint> sweep_grid(const RunConfig& cfg) {
  std::vector<GridPoint> out;
  const double M0 = 2.0 * std::numbers::pi * cfg.u_bar;
  for (double k : cfg.k) {
    std::size_t slice = 0;
    if (cfg.uses_amplitude()) {
      for (double a : cfg.amplitude) {
        out.push_back({k, a, M0, M0 * M0 / (4.0 * std::numbers::pi) + 0.5 * std::numbers::pi * a * a, slice++});
      }
    } else {
      for (double M : cfg.M) {
        for (double P : cfg.P) {
          const double excess = P - M * M / (4.0 * std::numbers::pi);
          const double a = excess > 0.0 ? std::sqrt(2.0 * excess / std::numbers::pi) : 0.0;
          out.push_back({k, a, M, P, slice++});
        }
      }
    }
  }
  return out;
}

TravelingWave solve_point(const RunConfig& cfg, const EquationSpec& spec, const GridPoint& point,
                          const TravelingWave* seed) {
  if (!cfg.uses_amplitude() && seed != nullptr) {
    return solve_wave(spec, point.k, point.M, point.P, *seed, cfg.solver);
  }
  const double u_bar = cfg.uses_amplitude() ? cfg.u_bar : point.M / (2.0 * std::numbers::pi);
  TravelingWave w =
      continue_family(spec, point.k, u_bar, amplitude_steps(point.amplitude, cfg.continuation_step), cfg.solver)
          .back();
  if (cfg.uses_amplitude() || w.degenerate) return w;
  return solve_wave(spec, point.k, point.M, point.P, w, cfg.solver);
}

SweepRow evaluate_point(const RunConfig& cfg, const GridPoint& point, Depth depth) {
  SweepRow row;
  row.k = point.k;
  row.amplitude = point.amplitude;
  row.M = point.M;
  row.P = point.P;
  row.c = kNaN;
  row.max_re_lambda = kNaN;
  for (auto& s : row.speeds) s = cplx(kNaN, kNaN);
  try {
    const EquationSpec spec = cfg.equation_spec();
    const TravelingWave wave = solve_point(cfg, spec, point);
    const ConservedTriple q = conserved_quantities(wave);
    row.amplitude = wave.amplitude();
    row.M = q.M;
    row.P = q.P;
    row.c = wave.c;
    const ParameterJacobian pjac = parameter_derivatives(wave, cfg.solver);
    const ModulationMatrix mm = assemble_modulation_matrix(wave, pjac, cfg.tol_classification);
    row.speeds = mm.speeds;
    row.classification = mm.classification;
    row.classified = true;
    if (depth == Depth::Rigorous) {
      const KernelBases bases = build_bases(wave, pjac);
      const ConnectionReport conn = verify_connection(wave, pjac, bases, cfg.tol_connection);
      VerdictOptions vo;
      vo.tau_list = cfg.tau_list;
      vo.tol = cfg.tol_classification;
      const Verdict v = modulational_verdict(wave, pjac, bases, vo);
      row.max_re_lambda = v.spectral_max_growth;
      row.consistent = to_string(v.consistent);
      if (!conn.pass) row.failure = "connection error " + format_double(conn.max_entry_error);
    }
  } catch (const Error& e) {
    row.failure = std::string(to_string(e.kind())) + " at " + point_label(point.k, point.M, point.P) + ": " + e.what();
  } catch (const std::exception& e) {
    row.failure = "internal error at " + point_label(point.k, point.M, point.P) + ": " + e.what();
  }
  row.failure = sanitize(row.failure);
  return row;
}

std::string sweep_csv_header() {
  return "k,amplitude,M,P,c,re_mu1,re_mu2,re_mu3,im_mu1,im_mu2,im_mu3,class,max_re_lambda,consistent,failure";
}

std::string sweep_csv_line(const SweepRow& r) {
  std::ostringstream os;
  os << field(r.k) << ',' << field(r.amplitude) << ',' << field(r.M) << ',' << field(r.P) << ',' << field(r.c);
  for (const auto& s : r.speeds) os << ',' << field(s.real());
  for (const auto& s : r.speeds) os << ',' << field(s.imag());
  os << ',' << (r.classified ? to_string(r.classification) : "") << ',' << field(r.max_re_lambda) << ','
     << r.consistent << ',' << sanitize(r.failure);
  return os.str();
}

SweepRow sweep_row_from_csv(const std::string& line) {
  std::vector<std::string> f;
  std::stringstream ss(line);
  std::string item;
  while (std::getline(ss, item, ',')) f.push_back(item);
  if (!line.empty() && line.back() == ',') f.emplace_back();
  if (f.size() != 15) throw Error(ErrorKind::Parse, "sweep CSV: expected 15 fields, found " + std::to_string(f.size()));
  SweepRow r;
  r.k = number_or_nan(f[0]);
  r.amplitude = number_or_nan(f[1]);
  r.M = number_or_nan(f[2]);
  r.P = number_or_nan(f[3]);
  r.c = number_or_nan(f[4]);
  for (std::size_t j = 0; j < 3; ++j) r.speeds[j] = cplx(number_or_nan(f[5 + j]), number_or_nan(f[8 + j]));
  r.classified = !f[11].empty();
  if (r.classified) r.classification = classification_from_string(f[11]);
  r.max_re_lambda = number_or_nan(f[12]);
  r.consistent = f[13];
  r.failure = f[14];
  return r;
}

SweepResult sweep_stability_diagram(const RunConfig& cfg, const SweepOptions& opts) {
  cfg.validate();
  const std::vector<GridPoint> grid = sweep_grid(cfg);
  if (grid.empty()) throw Error(ErrorKind::InvalidArgument, "sweep grid is empty");

  SweepResult result;
  result.rows.resize(grid.size());
  std::ofstream out;
  std::size_t start = 0;
  if (opts.csv) {
    if (opts.csv->has_parent_path()) std::filesystem::create_directories(opts.csv->parent_path());
    std::vector<std::string> done;
    if (opts.resume && std::filesystem::exists(*opts.csv)) {
      std::ifstream in(*opts.csv, std::ios::binary);
      std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
      const std::size_t keep = text.rfind('\n') == std::string::npos ? 0 : text.rfind('\n') + 1;
      std::stringstream lines(text.substr(0, keep));
      std::string line;
      bool first = true;
      while (std::getline(lines, line)) {
        if (first) {
          if (line != sweep_csv_header()) throw Error(ErrorKind::Parse, opts.csv->string() + ": header does not match");
          first = false;
        } else {
          done.push_back(line);
        }
      }
      if (done.size() > grid.size()) {
        throw Error(ErrorKind::Parse, opts.csv->string() + ": more rows than grid points");
      }
      for (std::size_t i = 0; i < done.size(); ++i) {
        result.rows[i] = sweep_row_from_csv(done[i]);
        if (result.rows[i].k != grid[i].k) {
          throw Error(ErrorKind::Parse, opts.csv->string() + ": row " + std::to_string(i + 1) + " does not match the grid");
        }
      }
      std::filesystem::resize_file(*opts.csv, first ? 0 : keep);
      start = done.size();
      result.resumed = start;
      out.open(*opts.csv, std::ios::binary | std::ios::app);
      if (first) out << sweep_csv_header() << '\n';
    } else {
      out.open(*opts.csv, std::ios::binary | std::ios::trunc);
      out << sweep_csv_header() << '\n';
    }
    if (!out) throw Error(ErrorKind::InvalidArgument, "cannot write " + opts.csv->string());
    out.flush();
  }

  // Workers fill slots; this thread writes them in grid order.
  const std::size_t todo = grid.size() - start;
  const int nthreads = std::max(1, std::min<int>(opts.threads > 0 ? opts.threads : sweep_threads(),
                                                 static_cast<int>(std::max<std::size_t>(todo, 1))));
  std::vector<char> ready(grid.size(), 0);
  std::mutex mu;
  std::condition_variable cv;
  std::atomic<std::size_t> next{start};
  {
    std::vector<std::jthread> pool;
    for (int t = 0; t < nthreads && todo > 0; ++t) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < grid.size(); i = next++) {
          SweepRow row = evaluate_point(cfg, grid[i], cfg.depth);
          std::lock_guard lock(mu);
          result.rows[i] = std::move(row);
          ready[i] = 1;
          cv.notify_all();
        }
      });
    }
    for (std::size_t i = start; i < grid.size(); ++i) {
      std::unique_lock lock(mu);
      cv.wait(lock, [&] { return ready[i] != 0; });
      if (out.is_open()) {
        out << sweep_csv_line(result.rows[i]) << '\n';
        out.flush();
      }
    }
  }

  // Boundaries along k within each slice.
  std::size_t slices = 0;
  for (const auto& g : grid) slices = std::max(slices, g.slice + 1);
  for (std::size_t s = 0; s < slices; ++s) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      if (grid[i].slice == s && definite(result.rows[i])) idx.push_back(i);
    }
    for (std::size_t j = 1; j < idx.size(); ++j) {
      const SweepRow& lo = result.rows[idx[j - 1]];
      const SweepRow& hi = result.rows[idx[j]];
      if (hyperbolic(lo.classification) == hyperbolic(hi.classification)) continue;
      Boundary b;
      b.slice = s;
      b.amplitude = grid[idx[j]].amplitude;
      b.M = grid[idx[j]].M;
      b.P = grid[idx[j]].P;
      b.k_lo = grid[idx[j - 1]].k;
      b.k_hi = grid[idx[j]].k;
      b.from = lo.classification;
      b.to = hi.classification;
      if (cfg.bisect) {
        GridPoint mid = grid[idx[j]];
        mid.k = 0.5 * (b.k_lo + b.k_hi);
        const SweepRow m = evaluate_point(cfg, mid, Depth::Formal);
        if (definite(m)) {
          if (hyperbolic(m.classification) == hyperbolic(lo.classification)) {
            b.k_lo = mid.k;
          } else {
            b.k_hi = mid.k;
          }
          b.refined = true;
        }
      }
      result.boundaries.push_back(b);
    }
  }
  return result;
}

}  // namespace modstab
