// pacok: command-line driver for the penalized Allen-Cahn-Ohta-Kawasaki solver.

#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pacok/energy.hpp"
#include "pacok/errors.hpp"
#include "pacok/harness.hpp"
#include "pacok/io.hpp"
#include "pacok/spectral.hpp"
#include "pacok/stepper.hpp"

namespace fs = std::filesystem;
using namespace pacok;

namespace {

enum ExitCode { kOk = 0, kFailure = 1, kConfig = 2, kInvariant = 3, kBlowup = 4 };

std::string one_line(std::string s) {
  for (char& c : s) {
    if (c == '\n' || c == '\r') c = ' ';
    if (c == '"') c = '\'';
  }
  return s;
}

int report_error(const char* kind, const std::string& message, int code) {
  std::fflush(stdout);
  std::fprintf(stderr, "error: kind=%s message=\"%s\"\n", kind, one_line(message).c_str());
  return code;
}

struct ConfigArgs {
  std::string config_path;
  std::vector<std::string> overrides;

  void attach(CLI::App* app) {
    app->add_option("--config", config_path, "Key-value config file");
    app->add_option("--set", overrides, "Override one config key (key=value); repeatable");
  }

  RunConfig load() const {
    RunConfig c = config_path.empty() ? RunConfig{} : load_config(config_path);
    for (const std::string& s : overrides) apply_override(c, s);
    validate(c);
    return c;
  }
};

std::string snapshot_name(std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "snapshot_%04zu.txt", index);
  return buf;
}

void print_summary(const RunResult& r) {
  const StepRecord& last = r.records.back();
  std::printf("steps=%ld t=%.10g min=%.17g max=%.17g energy=%.17g converged=%s\n", last.n, last.t,
              last.min, last.max, last.energy, r.reached_tolerance ? "yes" : "no");
  std::printf("monitors: bound_violations=%ld worst_bound_excess=%.3e energy_increases=%ld "
              "worst_energy_increase=%.3e\n",
              r.monitors.bound_violations, r.monitors.worst_bound_excess,
              r.monitors.energy_increases, r.monitors.worst_energy_increase);
}

int cmd_run(const ConfigArgs& args, std::string out_flag) {
  const RunConfig config = args.load();
  const std::string out = out_flag.empty() ? config.out_dir : out_flag;
  const Model model = make_model(config);
  RunOptions options = make_run_options(config);

  std::vector<double> times = config.snapshot_times;
  std::size_t next = 0;
  std::size_t written = 0;
  if (!out.empty()) {
    fs::create_directories(out);
    options.observer = [&](const SchemeState& s) {
      while (next < times.size() && s.time >= times[next] - 0.5 * model.params.tau) {
        write_snapshot(fs::path(out) / snapshot_name(written++), s.phi, s.time);
        ++next;
      }
    };
  }
  const RunResult result = run(SchemeState(make_initial(config)), model, options);
  if (!out.empty()) {
    write_series(fs::path(out) / "series.csv", result.records);
    if (times.empty()) {
      write_snapshot(fs::path(out) / snapshot_name(written++), result.state.phi, result.state.time);
    }
  }
  print_summary(result);
  return kOk;
}

int cmd_check(const ConfigArgs& args, const std::string& require) {
  const RunConfig config = args.load();
  const Model model = make_model(config);
  const ConditionReport report = check_conditions(model, make_grid(config));
  std::fputs(format_report(report).c_str(), stdout);
  const bool need_mpp = require == "mpp" || require == "both";
  const bool need_es = require == "es" || require == "both";
  if (need_mpp && !report.mpp_ok) {
    return report_error("condition", "maximum-principle condition not satisfied", kInvariant);
  }
  if (need_es && !report.es_ok) {
    return report_error("condition", "energy-stability condition not satisfied", kInvariant);
  }
  return kOk;
}

int cmd_norm(const ConfigArgs& args) {
  const RunConfig config = args.load();
  const Model model = make_model(config);
  std::printf("%.17g\n", estimate_linf_norm(model.op, make_grid(config)));
  return kOk;
}

int cmd_energy(const ConfigArgs& args, const std::string& snapshot) {
  RunConfig config = args.load();
  const LoadedSnapshot snap = read_snapshot(snapshot);
  const PeriodicGrid& g = snap.phi.grid();
  if (g.dim() == 2 && (g.size(0) != g.size(1) || g.half_extent(0) != g.half_extent(1))) {
    throw ConfigError("energy: only square 2D snapshots are supported");
  }
  config.dim = g.dim();
  config.n = g.size(0);
  config.half_extent = g.half_extent(0);
  const Model model = make_model(config);
  std::fputs(format_energy_csv(discrete_energy(snap.phi, model)).c_str(), stdout);
  return kOk;
}

struct ConvergeArgs {
  std::string scale = "desk";
  std::vector<double> eps{10.0, 20.0};
  int levels = 5;
  std::string out;
};

int cmd_converge(const ConvergeArgs& a) {
  const Scale scale = parse_scale(a.scale);
  std::vector<std::pair<double, RateStudyResult>> rows;
  for (double eps : a.eps) {
    RateStudySetup setup = RateStudySetup::table(scale, eps);
    setup.levels = a.levels;
    rows.emplace_back(eps, rate_study(setup));
  }
  const std::string csv = format_rate_table(rows);
  if (a.out.empty()) {
    std::fputs(csv.c_str(), stdout);
  } else {
    write_text_file(a.out, csv);
  }
  return kOk;
}

struct CoarsenArgs {
  int dim = 1;
  std::string preset = "g500";
  std::string scale = "desk";
  std::string out;
  std::uint64_t seed = 1;
  double horizon = 0.0;
};

int cmd_coarsen(const CoarsenArgs& a) {
  CoarseningPreset preset = coarsening_preset(a.preset, parse_scale(a.scale));
  if (preset.dim != a.dim) {
    throw ConfigError("preset '" + a.preset + "' is " + std::to_string(preset.dim) + "D, not " +
                      std::to_string(a.dim) + "D");
  }
  preset.seed = a.seed;
  if (a.horizon > 0.0) preset.horizon = a.horizon;
  const CoarseningResult result = coarsening_run(preset);
  if (!a.out.empty()) {
    fs::create_directories(a.out);
    write_series(fs::path(a.out) / "series.csv", result.run.records);
    for (std::size_t i = 0; i < result.snapshots.size(); ++i) {
      write_snapshot(fs::path(a.out) / snapshot_name(i), result.snapshots[i].phi,
                     result.snapshots[i].time);
    }
  }
  std::fputs(format_report(result.run.conditions).c_str(), stdout);
  print_summary(result.run);
  std::printf("bumps=%d\n", result.bumps);
  return kOk;
}

int cmd_pvism(const std::string& scale_name, const std::string& out) {
  PvismSetup setup;
  if (parse_scale(scale_name) == Scale::Paper) setup.t_cap = 200.0;
  const PvismComparison cmp = pvism_compare(setup);
  if (!out.empty()) {
    fs::create_directories(out);
    write_snapshot(fs::path(out) / "cubic.txt", cmp.cubic.phi, 0.0);
    write_snapshot(fs::path(out) / "linear.txt", cmp.linear.phi, 0.0);
  }
  std::printf("f,min,max,steps,converged\n");
  for (const auto& [name, o] : {std::pair{"cubic", &cmp.cubic}, std::pair{"linear", &cmp.linear}}) {
    std::printf("%s,%.17g,%.17g,%ld,%s\n", name, o->min, o->max, o->steps,
                o->converged ? "yes" : "no");
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stabilized semi-implicit solver for the penalized Allen-Cahn-Ohta-Kawasaki equation"};
  app.require_subcommand(1);

  ConfigArgs run_args, check_args, norm_args, energy_args;
  std::string run_out, require = "both", snapshot_path, pvism_scale = "desk", pvism_out;
  ConvergeArgs converge;
  CoarsenArgs coarsen;

  auto* run_cmd = app.add_subcommand("run", "Run a simulation from a config");
  run_args.attach(run_cmd);
  run_cmd->add_option("--out", run_out, "Output directory for series.csv and snapshots");

  auto* check_cmd = app.add_subcommand("check", "Report the MPP and energy-stability conditions");
  check_args.attach(check_cmd);
  check_cmd->add_option("--require", require, "Guarantee that must hold")
      ->check(CLI::IsMember({"mpp", "es", "both", "none"}));

  auto* norm_cmd = app.add_subcommand("norm", "Print the L-infinity norm of the long-range operator");
  norm_args.attach(norm_cmd);

  auto* energy_cmd = app.add_subcommand("energy", "Energy breakdown of a snapshot as CSV");
  energy_args.attach(energy_cmd);
  energy_cmd->add_option("--snapshot", snapshot_path, "Snapshot file")->required();

  auto* converge_cmd = app.add_subcommand("converge", "Temporal convergence table as CSV");
  converge_cmd->add_option("--scale", converge.scale)->check(CLI::IsMember({"desk", "paper"}));
  converge_cmd->add_option("--eps", converge.eps, "Interface widths in cells")->delimiter(',');
  converge_cmd->add_option("--levels", converge.levels)->check(CLI::PositiveNumber);
  converge_cmd->add_option("--out", converge.out, "CSV file (default: stdout)");

  auto* coarsen_cmd = app.add_subcommand("coarsen", "Coarsening run from random initial data");
  coarsen_cmd->add_option("--dim", coarsen.dim)->check(CLI::IsMember({1, 2}));
  coarsen_cmd->add_option("--preset", coarsen.preset)
      ->check(CLI::IsMember({"g500", "g2000", "g1000_2d", "g2000_2d"}));
  coarsen_cmd->add_option("--scale", coarsen.scale)->check(CLI::IsMember({"desk", "paper"}));
  coarsen_cmd->add_option("--out", coarsen.out, "Output directory");
  coarsen_cmd->add_option("--seed", coarsen.seed);
  coarsen_cmd->add_option("--T", coarsen.horizon, "Override the preset horizon");

  auto* pvism_cmd = app.add_subcommand("pvism", "Solvation equilibria for cubic and linear f");
  pvism_cmd->add_option("--scale", pvism_scale)->check(CLI::IsMember({"desk", "paper"}));
  pvism_cmd->add_option("--out", pvism_out, "Directory for the two equilibrium snapshots");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return report_error("usage", e.what(), kConfig);
  }

  try {
    if (*run_cmd) return cmd_run(run_args, run_out);
    if (*check_cmd) return cmd_check(check_args, require);
    if (*norm_cmd) return cmd_norm(norm_args);
    if (*energy_cmd) return cmd_energy(energy_args, snapshot_path);
    if (*converge_cmd) return cmd_converge(converge);
    if (*coarsen_cmd) return cmd_coarsen(coarsen);
    if (*pvism_cmd) return cmd_pvism(pvism_scale, pvism_out);
  } catch (const ConfigError& e) {
    return report_error("config", e.what(), kConfig);
  } catch (const ShapeError& e) {
    return report_error("config", e.what(), kConfig);
  } catch (const InvariantViolation& e) {
    return report_error("invariant", e.what(), kInvariant);
  } catch (const NumericalBlowup& e) {
    return report_error("blowup", e.what(), kBlowup);
  } catch (const fs::filesystem_error& e) {
    return report_error("io", e.what(), kFailure);
  } catch (const std::exception& e) {
    return report_error("internal", e.what(), kFailure);
  }
  return kFailure;
}
