#pragma once

#include <filesystem>
#include <map>
#include <string>

#include "modstab/bloch.hpp"

namespace modstab {

inline constexpr int kSchemaVersion = 1;

/// Flat record for reports: numbers and labels keyed by name.
struct Report {
  std::string kind;
  std::map<std::string, double> values;
  std::map<std::string, std::string> labels;
};

/// Versioned JSON text. Doubles are written in shortest round-trip form, so
/// load(persist(x)) is bit-identical.
std::string wave_to_text(const TravelingWave& wave);
TravelingWave wave_from_text(const std::string& text, const std::string& source = "<text>");

std::string jacobian_to_text(const ParameterJacobian& pjac);
ParameterJacobian jacobian_from_text(const std::string& text, const std::string& source = "<text>");

std::string matrix_to_text(const RMat& m);
RMat matrix_from_text(const std::string& text, const std::string& source = "<text>");

std::string report_to_text(const Report& report);
Report report_from_text(const std::string& text, const std::string& source = "<text>");

void persist(const TravelingWave& wave, const std::filesystem::path& path);
void persist(const ParameterJacobian& pjac, const std::filesystem::path& path);
void persist(const RMat& m, const std::filesystem::path& path);
void persist(const Report& report, const std::filesystem::path& path);

TravelingWave load_wave(const std::filesystem::path& path);
ParameterJacobian load_jacobian(const std::filesystem::path& path);
RMat load_matrix(const std::filesystem::path& path);
Report load_report(const std::filesystem::path& path);

/// Shortest decimal text that parses back to the same double.
std::string format_double(double x);

}  // namespace modstab
