#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pacok/grid.hpp"
#include "pacok/harness.hpp"
#include "pacok/model.hpp"
#include "pacok/stepper.hpp"

namespace pacok {

enum class InitialKind { TanhDisk, RandomPiecewise, Solvation, Constant };

std::string_view to_string(InitialKind kind);
InitialKind parse_initial_kind(std::string_view name);

/// Flat run configuration. Every key of the text format maps to one field;
/// the defaults below are what an empty file yields.
struct RunConfig {
  ModelParams params;
  /// epsilon was given as a multiple of h ("10h"); resolved by make_model.
  std::optional<double> epsilon_cells;

  int dim = 2;
  int n = 128;
  double half_extent = 1.0;

  OperatorKind op = OperatorKind::InverseLaplacian;
  double helmholtz_length = 0.1;
  double garnet_delta = 0.1;
  std::string symbol_file;

  Nonlinearity f = Nonlinearity::CubicHermite;
  bool extension = false;
  std::vector<double> solutes;  // non-empty selects the solvation model

  InitialKind initial = InitialKind::TanhDisk;
  double init_lo = 0.0;
  double init_hi = 0.8;
  int blocks = 16;
  double init_value = 0.5;

  double t_max = 1.0;
  double tol = 1e-3;
  std::uint64_t seed = 1;
  std::string out_dir;
  std::vector<double> snapshot_times;
  long monitor_stride = 1;
  long record_stride = 1;
  Scale scale = Scale::Desk;

  bool operator==(const RunConfig&) const = default;
};

/// Parses `key = value` lines; `#` starts a comment. Unknown keys, malformed
/// lines and out-of-range values throw ConfigError with the line number.
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::filesystem::path& path);

/// Applies one `key=value` override on top of an existing config.
void apply_override(RunConfig& config, std::string_view assignment);

/// Canonical text form; parse_config(to_config_text(c)) == c.
std::string to_config_text(const RunConfig& config);

/// Range checks shared by the parser and the CLI overrides.
void validate(const RunConfig& config);

PeriodicGrid make_grid(const RunConfig& config);
Model make_model(const RunConfig& config);
GridField make_initial(const RunConfig& config);
RunOptions make_run_options(const RunConfig& config);

// ---------------------------------------------------------------------------
// Files

/// CSV with header `n,t,min,max,energy,increment`, 17 significant digits.
void write_series(const std::filesystem::path& path, const std::vector<StepRecord>& records);
std::vector<StepRecord> read_series(const std::filesystem::path& path);
std::string format_series(const std::vector<StepRecord>& records);
std::vector<StepRecord> parse_series(std::string_view text);

/// `# pacok-grid v1 dim=<d> N=<N1[,N2]> X=<X1[,X2]> t=<time>` then one value
/// per line in row-major order.
void write_snapshot(const std::filesystem::path& path, const GridField& phi, double time);
struct LoadedSnapshot {
  GridField phi;
  double time = 0.0;
};
LoadedSnapshot read_snapshot(const std::filesystem::path& path);
std::string format_snapshot(const GridField& phi, double time);
LoadedSnapshot parse_snapshot(std::string_view text);

/// Symbol table rows `k1[,k2],value`; a non-numeric first line is a header.
SymbolTable parse_symbol_table(std::string_view text, int dim);
SymbolTable load_symbol_table(const std::filesystem::path& path, int dim);

/// `energy` breakdown as a two-line CSV.
std::string format_energy_csv(const EnergyBreakdown& e);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

}  // namespace pacok
