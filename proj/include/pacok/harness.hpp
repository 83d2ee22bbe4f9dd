#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pacok/grid.hpp"
#include "pacok/model.hpp"
#include "pacok/stepper.hpp"

namespace pacok {

enum class Scale { Desk, Paper };

std::string_view to_string(Scale scale);
Scale parse_scale(std::string_view name);

/// Worker count for independent runs: PACOK_THREADS if set and positive,
/// otherwise the hardware concurrency.
int worker_threads();

// ---------------------------------------------------------------------------
// Initial conditions

/// Radius sqrt(omega |T| / pi) + 0.1 of the disk initial condition.
double tanh_disk_radius(double omega, double measure);

/// 0.5 + 0.5 tanh((r0 - r) / (eps/3)) centred at the origin (2D only).
GridField initial_tanh_disk(const PeriodicGrid& grid, double omega, double epsilon);

/// Block-constant field with `blocks` blocks per axis, each value uniform in
/// [lo, hi]. Deterministic in `seed` on every platform.
GridField initial_random_piecewise(const PeriodicGrid& grid, double lo, double hi, int blocks,
                                   std::uint64_t seed);

/// 0.5 + 0.5 tanh((|x| - radius) / (eps/3)): solvent outside `radius`.
GridField initial_solvation_profile(const PeriodicGrid& grid, double epsilon, double radius);

/// Connected components of {phi > threshold}; periodic neighbours in 1D,
/// periodic 4-neighbourhood in 2D.
int count_bumps(const GridField& phi, double threshold = 0.5);

// ---------------------------------------------------------------------------
// Temporal convergence study

struct RateStudySetup {
  int n = 256;
  double half_extent = 1.0;
  double eps_cells = 10.0;  // epsilon = eps_cells * h
  double omega = 0.1;
  double gamma = 100.0;
  double penalty = 1000.0;
  double kappa = 2000.0;
  double horizon = 0.02;
  double base_tau = 1e-4;
  int levels = 5;
  double bench_tau = 1e-6;

  /// Disk-initial setup of the convergence table. Desk: N = 128 with
  /// benchmark 4e-6; paper: N = 256 with benchmark 1e-6.
  static RateStudySetup table(Scale scale, double eps_cells);
};

struct RateStudyResult {
  std::vector<double> taus;
  std::vector<double> errors;
  std::vector<double> rates;  // log2(e_i / e_{i+1})
};

/// Runs the benchmark and `levels` successively halved steps to the
/// horizon on the same grid and measures discrete L2 errors. Runs execute
/// concurrently on worker_threads() workers; results do not depend on the
/// worker count.
RateStudyResult rate_study(const RateStudySetup& setup);

/// CSV with header `eps_h,tau,error,rate`; the first row of each block has
/// an empty rate.
std::string format_rate_table(const std::vector<std::pair<double, RateStudyResult>>& rows);

// ---------------------------------------------------------------------------
// Coarsening runs

struct CoarseningPreset {
  std::string name;
  int dim = 1;
  int n = 256;
  double half_extent = 1.0;
  double eps_cells = 5.0;
  double omega = 0.3;
  double gamma = 500.0;
  double penalty = 2000.0;
  double kappa = 2000.0;
  double tau = 1e-3;
  double horizon = 1000.0;
  double tol = -1.0;
  int blocks = 32;
  double init_lo = 0.0;
  double init_hi = 0.8;
  std::uint64_t seed = 1;
  std::vector<double> snapshot_times;
  long record_stride = 100;
  long monitor_stride = 1;

  PeriodicGrid grid() const;
  Model model() const;
};

/// Presets g500, g2000 (1D) and g1000_2d, g2000_2d (2D).
CoarseningPreset coarsening_preset(std::string_view name, Scale scale);

struct Snapshot {
  double time;
  GridField phi;
};

struct CoarseningResult {
  RunResult run;
  std::vector<Snapshot> snapshots;
  int bumps = 0;
};

CoarseningResult coarsening_run(const CoarseningPreset& preset);

// ---------------------------------------------------------------------------
// Solvation (pVISM) comparison of cubic and linear f

struct PvismSetup {
  int n = 1024;
  double half_extent = 5.0;
  double eps_cells = 50.0;
  double kappa = 2000.0;
  double tau = 1e-4;
  double tol = 1e-3;
  double t_cap = 50.0;
  std::vector<double> solutes{0.0};
  SolvationConstants constants;

  PeriodicGrid grid() const;
  Model model(Nonlinearity f) const;
};

struct PvismOutcome {
  GridField phi;
  double min = 0.0;
  double max = 0.0;
  long steps = 0;
  bool converged = false;
};

struct PvismComparison {
  PvismOutcome cubic;
  PvismOutcome linear;
};

PvismComparison pvism_compare(const PvismSetup& setup);

}  // namespace pacok
