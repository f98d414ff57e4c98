#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "modstab/wave.hpp"

namespace modstab {

enum class Depth { Formal, Rigorous };

/// Everything a CLI run needs. Built from an INI file by load_config.
struct RunConfig {
  std::string equation = "whitham";
  std::map<std::string, double> params;
  /// Odd-power Ω coefficients when equation = custom.
  std::vector<double> omega_poly;
  /// quadratic, cubic, power-p or polynomial.
  std::string nonlinearity = "quadratic";
  std::vector<double> nonlinearity_coeffs;

  std::vector<double> k = {1.0};
  /// Either amplitudes (a₁) at mean u_bar, or M and P targets.
  std::vector<double> amplitude;
  double u_bar = 0.0;
  std::vector<double> M;
  std::vector<double> P;
  std::optional<std::filesystem::path> seed_wave;

  SolverOptions solver;
  double tol_connection = 1e-6;
  double tol_classification = 1e-6;

  /// Empty means adaptive.
  std::vector<double> tau_list;
  Depth depth = Depth::Formal;
  /// Largest continuation step in amplitude.
  double continuation_step = 0.05;
  bool bisect = true;

  std::filesystem::path output_dir = ".";

  bool uses_amplitude() const { return !amplitude.empty(); }
  EquationSpec equation_spec() const;
  /// Throws InvalidArgument on a violated invariant.
  void validate() const;
};

/// Strict INI parsing: unknown sections or keys are rejected with their location.
RunConfig parse_config(const std::string& text, const std::string& source = "<config>");
RunConfig load_config(const std::filesystem::path& path);

/// "a", "a, b, c" or "start:stop:step" (inclusive).
std::vector<double> parse_grid(const std::string& text);

Depth depth_from_string(const std::string& s);
const char* to_string(Depth d) noexcept;

}  // namespace modstab
