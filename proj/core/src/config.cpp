#include "modstab/config.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <boost/algorithm/string/trim.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

namespace modstab {

namespace {

namespace pt = boost::property_tree;

double parse_number(const std::string& raw) {
  const std::string s = boost::algorithm::trim_copy(raw);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw Error(ErrorKind::Parse, "expected a number, found '" + s + "'");
  }
  if (used != s.size() || !std::isfinite(v)) throw Error(ErrorKind::Parse, "expected a finite number, found '" + s + "'");
  return v;
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_number(item));
  return out;
}

bool parse_bool(const std::string& raw) {
  const std::string s = boost::algorithm::trim_copy(raw);
  if (s == "true" || s == "yes" || s == "1") return true;
  if (s == "false" || s == "no" || s == "0") return false;
  throw Error(ErrorKind::Parse, "expected true or false, found '" + s + "'");
}

int parse_int(const std::string& raw) {
  const double v = parse_number(raw);
  if (v != std::floor(v) || std::abs(v) > 1e9) throw Error(ErrorKind::Parse, "expected an integer, found '" + raw + "'");
  return static_cast<int>(v);
}

}  // namespace

const char* to_string(Depth d) noexcept { return d == Depth::Formal ? "formal" : "rigorous"; }

Depth depth_from_string(const std::string& s) {
  if (s == "formal") return Depth::Formal;
  if (s == "rigorous") return Depth::Rigorous;
  throw Error(ErrorKind::Parse, "depth must be formal or rigorous, found '" + s + "'");
}

std::vector<double> parse_grid(const std::string& raw) {
  const std::string text = boost::algorithm::trim_copy(raw);
  if (text.empty()) return {};
  if (text.find(':') == std::string::npos) return parse_list(text);
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ':')) parts.push_back(item);
  if (parts.size() != 3) throw Error(ErrorKind::Parse, "range must be start:stop:step, found '" + text + "'");
  const double start = parse_number(parts[0]);
  const double stop = parse_number(parts[1]);
  const double step = parse_number(parts[2]);
  if (!(step > 0.0)) throw Error(ErrorKind::Parse, "range step must be > 0 in '" + text + "'");
  if (stop < start) return {};
  const auto count = static_cast<long>(std::floor((stop - start) / step + 1e-9)) + 1;
  if (count > 1000000) throw Error(ErrorKind::Parse, "range '" + text + "' has too many points");
  std::vector<double> out;
  for (long i = 0; i < count; ++i) out.push_back(start + static_cast<double>(i) * step);
  return out;
}

EquationSpec RunConfig::equation_spec() const {
  Nonlinearity f;
  if (nonlinearity == "quadratic") {
    f = Nonlinearity::quadratic();
  } else if (nonlinearity == "cubic") {
    f = Nonlinearity::cubic();
  } else if (nonlinearity.rfind("power-", 0) == 0) {
    f = Nonlinearity::power(parse_int(nonlinearity.substr(6)));
  } else if (nonlinearity == "polynomial") {
    f = Nonlinearity::polynomial(nonlinearity_coeffs);
  } else {
    throw Error(ErrorKind::InvalidArgument, "unknown nonlinearity '" + nonlinearity + "'");
  }
  if (equation == "custom") return custom_equation(omega_poly, f);
  return make_equation(equation, params, f);
}

void RunConfig::validate() const {
  auto positive = [](double v, const char* what) {
    if (!(v > 0.0)) throw Error(ErrorKind::InvalidArgument, std::string(what) + " must be > 0");
  };
  positive(solver.tol_newton, "tolerances.newton");
  positive(solver.tol_derivs, "tolerances.derivs");
  positive(tol_connection, "tolerances.connection");
  positive(tol_classification, "tolerances.classification");
  positive(continuation_step, "sweep.continuation_step");
  if (solver.N < 16) throw Error(ErrorKind::InvalidArgument, "wave.N must be >= 16");
  if (solver.pad < 0) throw Error(ErrorKind::InvalidArgument, "wave.pad must be >= 0");
  if (k.empty()) throw Error(ErrorKind::InvalidArgument, "wave.k grid is empty");
  for (double v : k) positive(v, "wave.k");
  const bool mp = !M.empty() || !P.empty();
  if (uses_amplitude() == mp) {
    throw Error(ErrorKind::InvalidArgument, "give either wave.amplitude or both wave.M and wave.P");
  }
  if (mp && (M.empty() || P.empty())) throw Error(ErrorKind::InvalidArgument, "wave.M and wave.P grids must be non-empty");
  for (double a : amplitude) {
    if (!(a >= 0.0)) throw Error(ErrorKind::InvalidArgument, "wave.amplitude must be >= 0");
  }
  for (double t : tau_list) {
    if (!(t > 0.0 && t <= 0.1)) throw Error(ErrorKind::InvalidArgument, "bloch.tau values must lie in (0, 0.1]");
  }
  if (nonlinearity == "polynomial" && nonlinearity_coeffs.empty()) {
    throw Error(ErrorKind::InvalidArgument, "nonlinearity.coeffs required for polynomial");
  }
}

RunConfig parse_config(const std::string& text, const std::string& source) {
  pt::ptree tree;
  try {
    std::istringstream in(text);
    pt::ini_parser::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw Error(ErrorKind::Parse, source + ": line " + std::to_string(e.line()) + ": " + e.message());
  }

  RunConfig cfg;
  const std::map<std::string, std::set<std::string>> allowed = {
      {"equation", {"name", "omega"}},
      {"nonlinearity", {"name", "coeffs"}},
      {"wave", {"k", "amplitude", "u_bar", "M", "P", "N", "pad", "seed"}},
      {"tolerances", {"newton", "derivs", "connection", "classification", "cond_max", "max_iter", "decay"}},
      {"bloch", {"tau", "depth"}},
      {"sweep", {"continuation_step", "bisect"}},
      {"output", {"directory"}},
  };

  for (const auto& [section, body] : tree) {
    if (body.data().size() && body.empty()) {
      throw Error(ErrorKind::Parse, source + ": key '" + section + "' outside any section");
    }
    auto sec = allowed.find(section);
    if (sec == allowed.end()) throw Error(ErrorKind::Parse, source + ": unknown section [" + section + "]");
    for (const auto& [key, node] : body) {
      std::string value = node.get_value<std::string>();
      // Inline comments start at whitespace followed by ';' or '#'.
      for (std::size_t i = 1; i < value.size(); ++i) {
        if ((value[i] == ';' || value[i] == '#') && std::isspace(static_cast<unsigned char>(value[i - 1]))) {
          value.resize(i);
          break;
        }
      }
      const std::string where = source + ": [" + section + "] " + key;
      try {
        if (section == "equation" && !sec->second.count(key)) {
          // Remaining keys are symbol parameters; make_equation checks the names.
          cfg.params[key] = parse_number(value);
          continue;
        }
        if (!sec->second.count(key)) throw Error(ErrorKind::Parse, "unknown key");
        if (section == "equation") {
          if (key == "name") cfg.equation = boost::algorithm::trim_copy(value);
          if (key == "omega") cfg.omega_poly = parse_list(value);
        } else if (section == "nonlinearity") {
          if (key == "name") cfg.nonlinearity = boost::algorithm::trim_copy(value);
          if (key == "coeffs") cfg.nonlinearity_coeffs = parse_list(value);
        } else if (section == "wave") {
          if (key == "k") cfg.k = parse_grid(value);
          if (key == "amplitude") cfg.amplitude = parse_grid(value);
          if (key == "u_bar") cfg.u_bar = parse_number(value);
          if (key == "M") cfg.M = parse_grid(value);
          if (key == "P") cfg.P = parse_grid(value);
          if (key == "N") cfg.solver.N = parse_int(value);
          if (key == "pad") cfg.solver.pad = parse_int(value);
          if (key == "seed") cfg.seed_wave = boost::algorithm::trim_copy(value);
        } else if (section == "tolerances") {
          if (key == "newton") cfg.solver.tol_newton = parse_number(value);
          if (key == "derivs") cfg.solver.tol_derivs = parse_number(value);
          if (key == "connection") cfg.tol_connection = parse_number(value);
          if (key == "classification") cfg.tol_classification = parse_number(value);
          if (key == "cond_max") cfg.solver.cond_max = parse_number(value);
          if (key == "max_iter") cfg.solver.max_iter = parse_int(value);
          if (key == "decay") cfg.solver.decay_tol = parse_number(value);
        } else if (section == "bloch") {
          if (key == "tau") {
            const std::string v = boost::algorithm::trim_copy(value);
            cfg.tau_list = v == "adaptive" ? std::vector<double>{} : parse_grid(v);
          }
          if (key == "depth") cfg.depth = depth_from_string(boost::algorithm::trim_copy(value));
        } else if (section == "sweep") {
          if (key == "continuation_step") cfg.continuation_step = parse_number(value);
          if (key == "bisect") cfg.bisect = parse_bool(value);
        } else if (section == "output") {
          if (key == "directory") cfg.output_dir = boost::algorithm::trim_copy(value);
        }
      } catch (const Error& e) {
        throw Error(ErrorKind::Parse, where + ": " + e.what());
      }
    }
  }
  try {
    cfg.validate();
    (void)cfg.equation_spec();
  } catch (const Error& e) {
    throw Error(ErrorKind::Parse, source + ": " + e.what());
  }
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::InvalidArgument, "cannot read config " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path.string());
}

}  // namespace modstab
