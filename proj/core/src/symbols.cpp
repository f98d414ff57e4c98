#include "modstab/symbols.hpp"

#include <cmath>
#include <sstream>

#include "modstab/errors.hpp"

namespace modstab {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "invalid-argument";
    case ErrorKind::UnsupportedSymbol: return "unsupported-symbol";
    case ErrorKind::NumericRange: return "numeric-range";
    case ErrorKind::ConvergenceFailure: return "convergence-failure";
    case ErrorKind::IllConditioned: return "ill-conditioned";
    case ErrorKind::DegenerateParametrization: return "degenerate-parametrization";
    case ErrorKind::AssumptionViolated: return "assumption-violated";
    case ErrorKind::ContinuationStalled: return "continuation-stalled";
    case ErrorKind::Parse: return "parse-error";
    case ErrorKind::Migration: return "migration-error";
    case ErrorKind::Numeric: return "numeric-error";
  }
  return "unknown";
}

// ---------------------------------------------------------------------------
// Nonlinearity

Nonlinearity::Nonlinearity(std::string name, std::vector<double> coeffs)
    : name_(std::move(name)), coeffs_(std::move(coeffs)) {
  if (coeffs_.empty()) coeffs_.push_back(0.0);
  while (coeffs_.size() > 1 && coeffs_.back() == 0.0) coeffs_.pop_back();
  for (double a : coeffs_) {
    if (!std::isfinite(a)) {
      throw Error(ErrorKind::InvalidArgument, "nonlinearity coefficients must be finite");
    }
  }
}

Nonlinearity Nonlinearity::quadratic() { return {"quadratic", {0.0, 0.0, 0.5}}; }

Nonlinearity Nonlinearity::cubic() { return {"cubic", {0.0, 0.0, 0.0, 1.0 / 3.0}}; }

Nonlinearity Nonlinearity::power(int p) {
  if (p < 2 || p > 12) {
    throw Error(ErrorKind::InvalidArgument, "power nonlinearity needs an integer p in [2, 12]");
  }
  std::vector<double> c(static_cast<std::size_t>(p) + 1, 0.0);
  c.back() = 1.0 / p;
  return {"power-" + std::to_string(p), std::move(c)};
}

Nonlinearity Nonlinearity::polynomial(std::vector<double> coeffs) {
  return {"polynomial", std::move(coeffs)};
}

double Nonlinearity::eval(double u, int order) const {
  if (order < 0 || order > 2) {
    throw Error(ErrorKind::InvalidArgument, "nonlinearity order must be 0, 1 or 2");
  }
  double acc = 0.0;
  for (int j = degree(); j >= order; --j) {
    double coef = coeffs_[static_cast<std::size_t>(j)];
    for (int m = 0; m < order; ++m) coef *= (j - m);
    acc = acc * u + coef;
  }
  if (!std::isfinite(acc)) {
    std::ostringstream os;
    os << "nonlinearity overflow at u = " << u;
    throw Error(ErrorKind::NumericRange, os.str());
  }
  return acc;
}

double Nonlinearity::antiderivative(double u) const {
  double acc = 0.0;
  for (int j = degree(); j >= 0; --j) acc = acc * u + coeffs_[static_cast<std::size_t>(j)] / (j + 1);
  acc *= u;
  if (!std::isfinite(acc)) throw Error(ErrorKind::NumericRange, "antiderivative overflow");
  return acc;
}

// ---------------------------------------------------------------------------
// Catalogue

namespace {

using Derivs = std::array<double, 4>;

Derivs kdv_omega(double q) {
  return {q - q * q * q / 6.0, 1.0 - q * q / 2.0, -q, -1.0};
}

Derivs kawahara_omega(double q) {
  const double q2 = q * q;
  return {q2 * q * (q2 - 1.0), q2 * (5.0 * q2 - 3.0), q * (20.0 * q2 - 6.0), 60.0 * q2 - 6.0};
}

Derivs fornberg_whitham_omega(double q) {
  const double q2 = q * q;
  const double d = 1.0 + q2;
  return {q / d, (1.0 - q2) / (d * d), 2.0 * q * (q2 - 3.0) / (d * d * d),
          -6.0 * (q2 * q2 - 6.0 * q2 + 1.0) / (d * d * d * d)};
}

// Ω = sqrt(G), G = q tanh q. Derivatives follow from differentiating Ω² = G.
Derivs whitham_omega(double q) {
  const double t = std::tanh(q);
  const double s = 1.0 - t * t;
  const double ds = -2.0 * t * s;
  const double dds = -2.0 * s * s + 4.0 * t * t * s;
  const double g0 = q * t;
  const double g1 = t + q * s;
  const double g2 = 2.0 * s + q * ds;
  const double g3 = 3.0 * ds + q * dds;
  const double w0 = std::sqrt(g0);
  const double w1 = g1 / (2.0 * w0);
  const double w2 = (g2 - 2.0 * w1 * w1) / (2.0 * w0);
  const double w3 = (g3 - 6.0 * w1 * w2) / (2.0 * w0);
  return {w0, w1, w2, w3};
}

Derivs ilw_omega(double q, double delta) {
  const double x = delta * q;
  double coth = 1.0;
  double csch2 = 0.0;
  if (x < 300.0) {
    const double sh = std::sinh(x);
    coth = std::cosh(x) / sh;
    csch2 = 1.0 / (sh * sh);
  }
  const double d1 = -delta * csch2;
  const double d2 = 2.0 * delta * delta * coth * csch2;
  const double d3 = -2.0 * delta * delta * delta * csch2 * (csch2 + 2.0 * coth * coth);
  return {q * q * coth - q / delta, 2.0 * q * coth + q * q * d1 - 1.0 / delta,
          2.0 * coth + 4.0 * q * d1 + q * q * d2, 6.0 * d1 + 6.0 * q * d2 + q * q * d3};
}

Derivs benjamin_ono_omega(double q) { return {q * q, 2.0 * q, 2.0, 0.0}; }

double param_or(const std::map<std::string, double>& params, const std::string& key,
                double fallback) {
  auto it = params.find(key);
  return it == params.end() ? fallback : it->second;
}

void check_params(std::string_view name, const std::map<std::string, double>& params,
                  const std::vector<std::string>& allowed) {
  for (const auto& [key, value] : params) {
    bool ok = false;
    for (const auto& a : allowed) ok = ok || a == key;
    if (!ok) {
      throw Error(ErrorKind::InvalidArgument,
                  "equation '" + std::string(name) + "' has no parameter '" + key + "'");
    }
    if (!std::isfinite(value)) throw Error(ErrorKind::InvalidArgument, "non-finite parameter " + key);
  }
}

// Series for Ω built from the even series of c, used near q = 0 when the
// closed form divides by a vanishing quantity.
Derivs omega_from_series(const ZeroSeries& z, double q) {
  const double q2 = q * q;
  return {q * (z.c0 + q2 * (z.c2 + q2 * z.c4)), z.c0 + q2 * (3.0 * z.c2 + 5.0 * z.c4 * q2),
          q * (6.0 * z.c2 + 20.0 * z.c4 * q2), 6.0 * z.c2 + 60.0 * z.c4 * q2};
}

struct Builtin {
  const char* name;
  const char* formula;
  std::vector<std::string> params;
  bool assumption1;
  bool smooth_at_zero;
};

const std::vector<Builtin>& builtins() {
  static const std::vector<Builtin> table = {
      {"kdv", "c(q) = 1 - q^2/6", {}, true, true},
      {"whitham", "c(q) = sqrt(tanh(q)/q)", {}, true, true},
      {"kawahara", "c(q) = -q^2 + q^4", {}, true, true},
      {"ilw", "c(q) = q coth(delta q) - 1/delta", {"delta"}, true, true},
      {"benjamin-ono", "c(q) = |q|", {}, true, false},
      {"fornberg-whitham", "c(q) = 1/(1 + q^2)", {}, true, true},
      {"burgers", "c(q) = i q", {}, false, true},
  };
  return table;
}

}  // namespace

std::vector<CatalogueEntry> catalogue() {
  std::vector<CatalogueEntry> out;
  for (const auto& b : builtins()) {
    out.push_back({b.name, b.formula, b.params, b.assumption1, b.smooth_at_zero});
  }
  return out;
}

EquationSpec make_equation(std::string_view name, const std::map<std::string, double>& params,
                           Nonlinearity nonlinearity) {
  EquationSpec spec;
  spec.name = std::string(name);
  spec.nonlinearity = std::move(nonlinearity);
  Dispersion& d = spec.dispersion;

  if (name == "kdv") {
    check_params(name, params, {});
    d.omega_nonneg = kdv_omega;
    d.zero_series = {1.0, -1.0 / 6.0, 0.0};
    d.formula = "c(q) = 1 - q^2/6";
  } else if (name == "whitham") {
    check_params(name, params, {});
    d.zero_series = {1.0, -1.0 / 6.0, 19.0 / 360.0};
    const ZeroSeries z = d.zero_series;
    d.omega_nonneg = [z](double q) {
      return q < kPhaseSeriesThreshold ? omega_from_series(z, q) : whitham_omega(q);
    };
    d.formula = "c(q) = sqrt(tanh(q)/q)";
  } else if (name == "kawahara") {
    check_params(name, params, {});
    d.omega_nonneg = kawahara_omega;
    d.zero_series = {0.0, -1.0, 1.0};
    d.formula = "c(q) = -q^2 + q^4";
  } else if (name == "ilw") {
    check_params(name, params, {"delta"});
    const double delta = param_or(params, "delta", 1.0);
    if (!(delta > 0.0)) throw Error(ErrorKind::InvalidArgument, "ILW depth delta must be > 0");
    spec.params["delta"] = delta;
    d.zero_series = {0.0, delta / 3.0, -delta * delta * delta / 45.0};
    const ZeroSeries z = d.zero_series;
    d.omega_nonneg = [z, delta](double q) {
      return q < kPhaseSeriesThreshold ? omega_from_series(z, q) : ilw_omega(q, delta);
    };
    d.formula = "c(q) = q coth(delta q) - 1/delta";
  } else if (name == "benjamin-ono") {
    check_params(name, params, {});
    d.omega_nonneg = benjamin_ono_omega;
    d.zero_series = {0.0, 0.0, 0.0};
    d.smooth_at_zero = false;
    d.formula = "c(q) = |q|";
  } else if (name == "fornberg-whitham") {
    check_params(name, params, {});
    d.omega_nonneg = fornberg_whitham_omega;
    d.zero_series = {1.0, -1.0, 1.0};
    d.formula = "c(q) = 1/(1 + q^2)";
  } else if (name == "burgers") {
    check_params(name, params, {});
    d.omega_nonneg = [](double) -> Derivs {
      throw Error(ErrorKind::UnsupportedSymbol,
                  "burgers symbol c(q) = iq is not real; it violates the real-symbol assumption");
    };
    d.assumption1 = false;
    d.formula = "c(q) = i q";
  } else {
    throw Error(ErrorKind::InvalidArgument, "unknown equation '" + std::string(name) + "'");
  }
  return spec;
}

EquationSpec custom_equation(std::vector<double> omega_poly, Nonlinearity nonlinearity) {
  if (omega_poly.size() < 2) {
    throw Error(ErrorKind::InvalidArgument, "custom Ω polynomial needs at least a linear term");
  }
  for (std::size_t j = 0; j < omega_poly.size(); ++j) {
    if (!std::isfinite(omega_poly[j])) {
      throw Error(ErrorKind::InvalidArgument, "custom Ω coefficients must be finite");
    }
    if (j % 2 == 0 && omega_poly[j] != 0.0) {
      throw Error(ErrorKind::InvalidArgument,
                  "custom Ω must be odd: coefficient of q^" + std::to_string(j) + " is nonzero");
    }
  }
  EquationSpec spec;
  spec.name = "custom";
  spec.omega_poly = omega_poly;
  spec.nonlinearity = std::move(nonlinearity);
  auto coef = [&](std::size_t j) { return j < omega_poly.size() ? omega_poly[j] : 0.0; };
  spec.dispersion.zero_series = {coef(1), coef(3), coef(5)};
  spec.dispersion.omega_nonneg = [poly = std::move(omega_poly)](double q) {
    Derivs out{0.0, 0.0, 0.0, 0.0};
    for (int order = 0; order < 4; ++order) {
      double acc = 0.0;
      for (int j = static_cast<int>(poly.size()) - 1; j >= order; --j) {
        double c = poly[static_cast<std::size_t>(j)];
        for (int m = 0; m < order; ++m) c *= (j - m);
        acc = acc * q + c;
      }
      out[static_cast<std::size_t>(order)] = acc;
    }
    return out;
  };
  std::ostringstream os;
  os << "Omega(q) =";
  for (std::size_t j = 1; j < spec.omega_poly.size(); j += 2) {
    os << (j == 1 ? " " : " + ") << spec.omega_poly[j] << " q^" << j;
  }
  spec.dispersion.formula = os.str();
  return spec;
}

void require_assumption1(const EquationSpec& spec) {
  if (!spec.dispersion.assumption1) {
    throw Error(ErrorKind::AssumptionViolated,
                "equation '" + spec.name + "' does not have a real odd dispersion symbol");
  }
}

// ---------------------------------------------------------------------------
// Evaluation

std::array<double, 4> omega_all(const EquationSpec& spec, double q) {
  const double a = std::abs(q);
  Derivs w = spec.dispersion.omega_nonneg(a);
  if (q < 0.0) {
    // Ω odd ⇒ even-order derivatives are odd, odd-order derivatives are even.
    w[0] = -w[0];
    w[2] = -w[2];
  }
  return w;
}

double omega_eval(const EquationSpec& spec, double q, int order) {
  if (order < 0 || order > 3) {
    throw Error(ErrorKind::InvalidArgument, "omega_eval order must be in 0..3");
  }
  if (!spec.dispersion.smooth_at_zero && q == 0.0 && order >= 2) {
    throw Error(ErrorKind::UnsupportedSymbol,
                "symbol of '" + spec.name + "' is not smooth at q = 0");
  }
  return omega_all(spec, q)[static_cast<std::size_t>(order)];
}

namespace detail {

std::array<double, 3> phase_speed_series(const EquationSpec& spec, double q) {
  const ZeroSeries& z = spec.dispersion.zero_series;
  const double q2 = q * q;
  return {z.c0 + q2 * (z.c2 + q2 * z.c4), q * (2.0 * z.c2 + 4.0 * z.c4 * q2),
          2.0 * z.c2 + 12.0 * z.c4 * q2};
}

std::array<double, 3> phase_speed_direct(const EquationSpec& spec, double q) {
  const Derivs w = omega_all(spec, q);
  const double c0 = w[0] / q;
  const double c1 = (w[1] - c0) / q;
  const double c2 = (w[2] - 2.0 * c1) / q;
  return {c0, c1, c2};
}

}  // namespace detail

std::array<double, 3> phase_speed_all(const EquationSpec& spec, double q) {
  if (spec.dispersion.smooth_at_zero) {
    if (std::abs(q) < kPhaseSeriesThreshold) return detail::phase_speed_series(spec, q);
    return detail::phase_speed_direct(spec, q);
  }
  if (q == 0.0) {
    return {spec.dispersion.zero_series.c0, 0.0, std::numeric_limits<double>::quiet_NaN()};
  }
  return detail::phase_speed_direct(spec, q);
}

double phase_speed(const EquationSpec& spec, double q, int order) {
  if (order < 0 || order > 2) {
    throw Error(ErrorKind::InvalidArgument, "phase_speed order must be in 0..2");
  }
  if (!spec.dispersion.smooth_at_zero && q == 0.0 && order == 2) {
    throw Error(ErrorKind::UnsupportedSymbol,
                "c''(0) is undefined for the non-smooth symbol of '" + spec.name + "'");
  }
  return phase_speed_all(spec, q)[static_cast<std::size_t>(order)];
}

std::complex<double> theta_multiplier(const EquationSpec& spec, double k, int n,
                                      MultiplierKind kind) {
  if (!(k > 0.0)) throw Error(ErrorKind::InvalidArgument, "wavenumber k must be > 0");
  const double q = n * k;
  switch (kind) {
    case MultiplierKind::K: return {phase_speed(spec, q, 0), 0.0};
    case MultiplierKind::K1: return {0.0, phase_speed(spec, q, 1)};
    case MultiplierKind::K2: return {-phase_speed(spec, q, 2), 0.0};
  }
  return {};
}

std::vector<double> nonlinearity_eval(const EquationSpec& spec, std::span<const double> u,
                                      int order) {
  std::vector<double> out;
  out.reserve(u.size());
  for (double x : u) {
    if (!std::isfinite(x)) throw Error(ErrorKind::NumericRange, "non-finite nonlinearity input");
    out.push_back(spec.nonlinearity.eval(x, order));
  }
  return out;
}

}  // namespace modstab
