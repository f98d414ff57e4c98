#include "modstab/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace modstab {

namespace {

using json = nlohmann::json;

std::string line_context(const std::string& text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

class Reader {
 public:
  Reader(const std::string& text, std::string source, const char* schema) : source_(std::move(source)) {
    try {
      doc_ = json::parse(text);
    } catch (const json::parse_error& e) {
      throw Error(ErrorKind::Parse, source_ + ": " + line_context(text, e.byte) + ": malformed JSON");
    }
    if (!doc_.is_object()) fail("<root>", "expected an object");
    const std::string got = str(doc_, "schema");
    if (got != schema) fail("schema", "expected '" + std::string(schema) + "', found '" + got + "'");
    const json& v = at(doc_, "version");
    if (!v.is_number_integer()) fail("version", "expected an integer");
    const auto version = v.get<long long>();
    if (version != kSchemaVersion) {
      throw Error(ErrorKind::Migration, source_ + ": schema version " + std::to_string(version) +
                                            " is not supported by this build (version " +
                                            std::to_string(kSchemaVersion) + "); no migration available");
    }
  }

  const json& root() const { return doc_; }

  [[noreturn]] void fail(const std::string& field, const std::string& what) const {
    throw Error(ErrorKind::Parse, source_ + ": field '" + field + "': " + what);
  }

  const json& at(const json& obj, const std::string& field) const {
    if (!obj.is_object()) fail(field, "parent is not an object");
    auto it = obj.find(field);
    if (it == obj.end()) fail(field, "missing");
    return *it;
  }

  double num(const json& obj, const std::string& field) const {
    const json& v = at(obj, field);
    if (!v.is_number()) fail(field, "expected a number");
    return v.get<double>();
  }

  long long integer(const json& obj, const std::string& field) const {
    const json& v = at(obj, field);
    if (!v.is_number_integer()) fail(field, "expected an integer");
    return v.get<long long>();
  }

  bool boolean(const json& obj, const std::string& field) const {
    const json& v = at(obj, field);
    if (!v.is_boolean()) fail(field, "expected true or false");
    return v.get<bool>();
  }

  std::string str(const json& obj, const std::string& field) const {
    const json& v = at(obj, field);
    if (!v.is_string()) fail(field, "expected a string");
    return v.get<std::string>();
  }

  std::vector<double> numbers(const json& obj, const std::string& field) const {
    const json& v = at(obj, field);
    if (!v.is_array()) fail(field, "expected an array");
    std::vector<double> out;
    out.reserve(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!v[i].is_number()) fail(field + "[" + std::to_string(i) + "]", "expected a number");
      out.push_back(v[i].get<double>());
    }
    return out;
  }

  RVec vec(const json& obj, const std::string& field) const {
    const auto v = numbers(obj, field);
    return Eigen::Map<const RVec>(v.data(), static_cast<Eigen::Index>(v.size()));
  }

 private:
  std::string source_;
  json doc_;
};

json header(const char* schema) {
  json j;
  j["schema"] = schema;
  j["version"] = kSchemaVersion;
  return j;
}

void require_finite(double x, const char* field) {
  if (!std::isfinite(x)) throw Error(ErrorKind::NumericRange, std::string("cannot persist non-finite ") + field);
}

json vec_json(const RVec& v, const char* field) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    require_finite(v(i), field);
    a.push_back(v(i));
  }
  return a;
}

json equation_json(const EquationSpec& spec) {
  json e;
  e["name"] = spec.name;
  e["params"] = json::object();
  for (const auto& [key, value] : spec.params) e["params"][key] = value;
  e["omega_poly"] = spec.omega_poly;
  e["nonlinearity"] = {{"name", spec.nonlinearity.name()}, {"coeffs", spec.nonlinearity.coeffs()}};
  return e;
}

EquationSpec equation_from(const Reader& r, const json& e) {
  const std::string name = r.str(e, "name");
  const json& nl = r.at(e, "nonlinearity");
  Nonlinearity f(r.str(nl, "name"), r.numbers(nl, "coeffs"));
  if (name == "custom") return custom_equation(r.numbers(e, "omega_poly"), f);
  std::map<std::string, double> params;
  const json& p = r.at(e, "params");
  if (!p.is_object()) r.fail("params", "expected an object");
  for (auto it = p.begin(); it != p.end(); ++it) params[it.key()] = r.num(p, it.key());
  return make_equation(name, params, f);
}

std::string dump(const json& j) { return j.dump(1) + "\n"; }

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::InvalidArgument, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spill(const std::string& text, const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::InvalidArgument, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(ErrorKind::InvalidArgument, "write failed for " + path.string());
}

}  // namespace

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::string wave_to_text(const TravelingWave& wave) {
  json j = header("modstab.wave");
  j["equation"] = equation_json(wave.spec);
  for (auto [x, name] : {std::pair{wave.k, "k"}, {wave.c, "c"}, {wave.b, "b"}}) require_finite(x, name);
  j["k"] = wave.k;
  j["c"] = wave.c;
  j["b"] = wave.b;
  j["N"] = wave.N;
  j["degenerate"] = wave.degenerate;
  j["M_target"] = wave.M_target;
  j["P_target"] = wave.P_target;
  j["coeffs"] = vec_json(wave.coeffs, "coeffs");
  j["newton_history"] = wave.newton_history;
  return dump(j);
}

TravelingWave wave_from_text(const std::string& text, const std::string& source) {
  const Reader r(text, source, "modstab.wave");
  const json& j = r.root();
  TravelingWave w;
  w.spec = equation_from(r, r.at(j, "equation"));
  w.k = r.num(j, "k");
  w.c = r.num(j, "c");
  w.b = r.num(j, "b");
  w.N = static_cast<int>(r.integer(j, "N"));
  w.degenerate = r.boolean(j, "degenerate");
  w.M_target = r.num(j, "M_target");
  w.P_target = r.num(j, "P_target");
  w.coeffs = r.vec(j, "coeffs");
  w.newton_history = r.numbers(j, "newton_history");
  if (w.N < 1 || w.coeffs.size() != w.N + 1) r.fail("coeffs", "expected N+1 entries");
  if (!(w.k > 0.0)) r.fail("k", "must be positive");
  return w;
}

std::string jacobian_to_text(const ParameterJacobian& p) {
  json j = header("modstab.jacobian");
  j["phi_k"] = vec_json(p.phi_k, "phi_k");
  j["phi_M"] = vec_json(p.phi_M, "phi_M");
  j["phi_P"] = vec_json(p.phi_P, "phi_P");
  j["c_k"] = p.c_k;
  j["c_M"] = p.c_M;
  j["c_P"] = p.c_P;
  j["b_k"] = p.b_k;
  j["b_M"] = p.b_M;
  j["b_P"] = p.b_P;
  return dump(j);
}

ParameterJacobian jacobian_from_text(const std::string& text, const std::string& source) {
  const Reader r(text, source, "modstab.jacobian");
  const json& j = r.root();
  ParameterJacobian p;
  p.phi_k = r.vec(j, "phi_k");
  p.phi_M = r.vec(j, "phi_M");
  p.phi_P = r.vec(j, "phi_P");
  p.c_k = r.num(j, "c_k");
  p.c_M = r.num(j, "c_M");
  p.c_P = r.num(j, "c_P");
  p.b_k = r.num(j, "b_k");
  p.b_M = r.num(j, "b_M");
  p.b_P = r.num(j, "b_P");
  if (p.phi_M.size() != p.phi_k.size() || p.phi_P.size() != p.phi_k.size()) {
    r.fail("phi_M", "length differs from phi_k");
  }
  return p;
}

std::string matrix_to_text(const RMat& m) {
  json j = header("modstab.matrix");
  j["rows"] = m.rows();
  j["cols"] = m.cols();
  json data = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      require_finite(m(i, c), "matrix entry");
      data.push_back(m(i, c));
    }
  }
  j["data"] = data;
  return dump(j);
}

RMat matrix_from_text(const std::string& text, const std::string& source) {
  const Reader r(text, source, "modstab.matrix");
  const json& j = r.root();
  const auto rows = r.integer(j, "rows");
  const auto cols = r.integer(j, "cols");
  const auto data = r.numbers(j, "data");
  if (rows < 0 || cols < 0 || static_cast<long long>(data.size()) != rows * cols) {
    r.fail("data", "expected rows*cols entries");
  }
  RMat m(rows, cols);
  for (long long i = 0; i < rows; ++i) {
    for (long long c = 0; c < cols; ++c) m(i, c) = data[static_cast<std::size_t>(i * cols + c)];
  }
  return m;
}

std::string report_to_text(const Report& report) {
  json j = header("modstab.report");
  j["kind"] = report.kind;
  json values = json::object();
  // Non-finite values are stored as text.
  for (const auto& [key, v] : report.values) values[key] = std::isfinite(v) ? json(v) : json(format_double(v));
  j["values"] = values;
  j["labels"] = report.labels;
  return dump(j);
}

Report report_from_text(const std::string& text, const std::string& source) {
  const Reader r(text, source, "modstab.report");
  const json& j = r.root();
  Report rep;
  rep.kind = r.str(j, "kind");
  const json& values = r.at(j, "values");
  if (!values.is_object()) r.fail("values", "expected an object");
  for (auto it = values.begin(); it != values.end(); ++it) {
    if (it->is_number()) {
      rep.values[it.key()] = it->get<double>();
    } else if (it->is_string()) {
      const std::string s = it->get<std::string>();
      if (s == "nan") {
        rep.values[it.key()] = std::nan("");
      } else if (s == "inf" || s == "-inf") {
        rep.values[it.key()] = s == "inf" ? HUGE_VAL : -HUGE_VAL;
      } else {
        r.fail("values." + it.key(), "expected a number");
      }
    } else {
      r.fail("values." + it.key(), "expected a number");
    }
  }
  const json& labels = r.at(j, "labels");
  if (!labels.is_object()) r.fail("labels", "expected an object");
  for (auto it = labels.begin(); it != labels.end(); ++it) {
    if (!it->is_string()) r.fail("labels." + it.key(), "expected a string");
    rep.labels[it.key()] = it->get<std::string>();
  }
  return rep;
}

void persist(const TravelingWave& wave, const std::filesystem::path& path) { spill(wave_to_text(wave), path); }
void persist(const ParameterJacobian& pjac, const std::filesystem::path& path) {
  spill(jacobian_to_text(pjac), path);
}
void persist(const RMat& m, const std::filesystem::path& path) { spill(matrix_to_text(m), path); }
void persist(const Report& report, const std::filesystem::path& path) { spill(report_to_text(report), path); }

TravelingWave load_wave(const std::filesystem::path& path) { return wave_from_text(slurp(path), path.string()); }
ParameterJacobian load_jacobian(const std::filesystem::path& path) {
  return jacobian_from_text(slurp(path), path.string());
}
RMat load_matrix(const std::filesystem::path& path) { return matrix_from_text(slurp(path), path.string()); }
Report load_report(const std::filesystem::path& path) { return report_from_text(slurp(path), path.string()); }

}  // namespace modstab
