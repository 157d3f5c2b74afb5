#pragma once

// Study drivers: single runs, spatial and temporal convergence tables,
// qualitative snapshots, and CSV / gnuplot emission.

#include <cmath>
#include <filesystem>
#include <limits>
#include <memory>
#include <string>
#include <vector>

#include "sldg/ldg.hpp"
#include "sldg/linalg.hpp"
#include "sldg/problems.hpp"
#include "sldg/remap2d.hpp"
#include "sldg/timeint.hpp"

namespace sldg {

inline constexpr double kUnset = std::numeric_limits<double>::quiet_NaN();

struct RunConfig {
  std::string problem = "advect1d";
  int k = 2;
  std::string tableau = "dirk4";
  double cfl = 1.0;
  double eps = kUnset;      // problem default when unset
  double t_final = kUnset;  // problem default when unset
  FluxChoice flux = FluxChoice::standard();
  RemapMode mode = RemapMode::Quad;
  LinearSolverConfig solver;
  int max_steps = -1;  // stop early after this many steps (negative: run to t_final)
};

struct StepRecord {
  double t = 0.0;
  double mass = 0.0;
  double l2 = 0.0;
};

struct RunLog {
  int steps = 0;
  long iterations = 0;
  double dt = 0.0;
  double t_end = 0.0;
  double max_mass_drift = 0.0;  // max over steps of |mass(u^n) - mass(u^0)|
  std::vector<StepRecord> history;
};

Field1D solve_1d(const Problem1D& p, int n, const RunConfig& cfg, RunLog* log = nullptr);
Field2D solve_2d(const Problem2D& p, int n, const RunConfig& cfg, RunLog* log = nullptr);

struct ResultRow {
  double key = 0.0;  // mesh size N (N x N in 2D) or CFL
  ErrorNorms errors;
  ErrorNorms orders{kUnset, kUnset, kUnset};
  double seconds = 0.0;
  double mass_drift = 0.0;
  bool ok = true;
  std::string message;
};

struct StudyTable {
  std::string key_name = "mesh";
  std::vector<ResultRow> rows;
  double slope = kUnset;  // fitted L1 slope (temporal studies)
  bool all_ok() const;
};

struct StudyConfig {
  RunConfig run;
  std::vector<int> meshes{10, 20, 40, 80, 160};
  std::vector<double> cfls;
  int reference_mesh = 0;         // spatial: reference-solution mesh when no exact solution
  double reference_cfl = kUnset;  // temporal: reference run CFL (same mesh) instead of the exact solution
  int fit_points = 4;             // temporal: largest CFL values used for the slope
  /// Precomputed reference field at the final time; overrides reference_mesh
  /// (e.g. one QC reference shared by quad and QC studies).
  std::shared_ptr<const Field1D> reference_1d;
  std::shared_ptr<const Field2D> reference_2d;
  bool mean_norms = false;  // report domain_mean() errors instead of integrals
};

/// order = log(e_prev / e_cur) / log(key_cur / key_prev); NaN when undefined.
double convergence_order(double e_prev, double e_cur, double key_prev, double key_cur);
/// Least-squares slope of log(err) against log(key).
double fitted_slope(const std::vector<double>& keys, const std::vector<double>& errs);

StudyTable run_spatial_study(const StudyConfig& cfg);
StudyTable run_temporal_study(const StudyConfig& cfg);

struct QualitativeConfig {
  RunConfig run;
  int mesh = 50;
  int plot_points = 101;
  std::vector<double> cut_x{-1.0};  // vertical lines x = X
  std::vector<double> cut_y{1.0};   // horizontal lines y = Y
};

struct QualitativeResult {
  RunLog log;
  std::vector<std::filesystem::path> files;
};

QualitativeResult run_qualitative(const QualitativeConfig& cfg, const std::filesystem::path& out_dir);

//------------------------------------------------------------------------------
// Emission

/// Scientific notation with 6 significant digits; empty for NaN.
std::string format_number(double v);

void write_table_csv(const StudyTable& table, const std::filesystem::path& path, bool with_timing = true);
/// Log-log plot script for a table CSV.
void write_table_gnuplot(const StudyTable& table, const std::filesystem::path& csv,
                         const std::filesystem::path& script, const std::string& title);
void write_history_csv(const RunLog& log, const std::filesystem::path& path);

}  // namespace sldg
