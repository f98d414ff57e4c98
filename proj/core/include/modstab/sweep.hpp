#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "modstab/config.hpp"
#include "modstab/bloch.hpp"

namespace modstab {

struct SweepRow {
  double k = 0.0;
  double amplitude = 0.0;
  double M = 0.0;
  double P = 0.0;
  double c = 0.0;
  Speeds speeds{};
  /// False for failed points.
  bool classified = false;
  Classification classification = Classification::Marginal;
  /// NaN unless the rigorous depth ran.
  double max_re_lambda = 0.0;
  /// "true", "false", "indeterminate" or empty for the formal depth.
  std::string consistent;
  std::string failure;
};

/// Hyperbolic/elliptic switch between neighbouring k at one fixed (amplitude) or (M, P).
struct Boundary {
  std::size_t slice = 0;
  double amplitude = 0.0;
  double M = 0.0;
  double P = 0.0;
  double k_lo = 0.0;
  double k_hi = 0.0;
  Classification from = Classification::Marginal;
  Classification to = Classification::Marginal;
  bool refined = false;
  double k_star() const { return 0.5 * (k_lo + k_hi); }
};

struct SweepResult {
  std::vector<SweepRow> rows;
  std::vector<Boundary> boundaries;
  /// Rows taken over from an existing CSV by --resume.
  std::size_t resumed = 0;
};

struct SweepOptions {
  std::optional<std::filesystem::path> csv;
  bool resume = false;
  /// 0 selects sweep_threads().
  int threads = 0;
};

/// Worker count: hardware concurrency capped by MODSTAB_THREADS.
int sweep_threads();

/// Grid point i of the config in row order (k outer).
/// M and P are the nominal targets, from ū and a₁ in amplitude mode.
struct GridPoint {
  double k = 0.0;
  double amplitude = 0.0;
  double M = 0.0;
  double P = 0.0;
  std::size_t slice = 0;
};
std::vector<GridPoint> sweep_grid(const RunConfig& cfg);

/// Continuation in a₁ from the constant state; (M, P) points finish with a P-constrained solve,
/// seeded by seed when given.
TravelingWave solve_point(const RunConfig& cfg, const EquationSpec& spec, const GridPoint& point,
                          const TravelingWave* seed = nullptr);

/// "(k=…, M=…, P=…)".
std::string point_label(double k, double M, double P);

/// Solves, classifies and, at the rigorous depth, runs the Bloch verdict for one point.
/// Failures are recorded in the row.
SweepRow evaluate_point(const RunConfig& cfg, const GridPoint& point, Depth depth);

SweepResult sweep_stability_diagram(const RunConfig& cfg, const SweepOptions& opts = {});

std::string sweep_csv_header();
std::string sweep_csv_line(const SweepRow& row);
SweepRow sweep_row_from_csv(const std::string& line);

}  // namespace modstab
