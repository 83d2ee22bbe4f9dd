#include "pacok/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>
#include <thread>

#include "pacok/errors.hpp"

namespace pacok {

std::string_view to_string(Scale scale) { return scale == Scale::Desk ? "desk" : "paper"; }

Scale parse_scale(std::string_view name) {
  if (name == "desk") return Scale::Desk;
  if (name == "paper") return Scale::Paper;
  throw ConfigError("unknown scale '" + std::string(name) + "' (expected desk|paper)");
}

int worker_threads() {
  if (const char* env = std::getenv("PACOK_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

namespace {

/// Runs fn(0..count-1) on up to `workers` threads; rethrows the first error.
template <class Fn>
void parallel_for(std::size_t count, int workers, Fn&& fn) {
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  const auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    }
  };
  const std::size_t n = std::min<std::size_t>(count, static_cast<std::size_t>(std::max(1, workers)));
  if (n <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < n; ++t) pool.emplace_back(worker);
  }
  if (error) std::rethrow_exception(error);
}

double unit_uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

double tanh_disk_radius(double omega, double measure) {
  return std::sqrt(omega * measure / std::numbers::pi) + 0.1;
}

GridField initial_tanh_disk(const PeriodicGrid& grid, double omega, double epsilon) {
  if (grid.dim() != 2) throw ConfigError("tanh disk initial condition needs a 2D grid");
  const double r0 = tanh_disk_radius(omega, grid.measure());
  GridField phi(grid);
  for (long i = 0; i < grid.size(0); ++i) {
    const double x = grid.coordinate(0, i);
    for (long j = 0; j < grid.size(1); ++j) {
      const double r = std::hypot(x, grid.coordinate(1, j));
      phi[grid.wrap(i, j)] = 0.5 + 0.5 * std::tanh((r0 - r) / (epsilon / 3.0));
    }
  }
  return phi;
}

GridField initial_random_piecewise(const PeriodicGrid& grid, double lo, double hi, int blocks,
                                   std::uint64_t seed) {
  if (!(lo <= hi)) throw ConfigError("random initial: lo must not exceed hi");
  if (blocks < 1) throw ConfigError("random initial: blocks must be >= 1");
  for (int axis = 0; axis < grid.dim(); ++axis) {
    if (grid.size(axis) % blocks != 0) {
      throw ConfigError("random initial: blocks=" + std::to_string(blocks) +
                        " does not divide N=" + std::to_string(grid.size(axis)));
    }
  }
  std::mt19937_64 rng(seed);
  const int per_axis_2 = grid.dim() == 2 ? blocks : 1;
  std::vector<double> values(static_cast<std::size_t>(blocks) * per_axis_2);
  for (double& v : values) v = lo + (hi - lo) * unit_uniform(rng);

  GridField phi(grid);
  const long w1 = grid.size(0) / blocks;
  if (grid.dim() == 1) {
    for (long i = 0; i < grid.size(0); ++i) phi[grid.wrap(i)] = values[static_cast<std::size_t>(i / w1)];
    return phi;
  }
  const long w2 = grid.size(1) / blocks;
  for (long i = 0; i < grid.size(0); ++i) {
    for (long j = 0; j < grid.size(1); ++j) {
      phi[grid.wrap(i, j)] = values[static_cast<std::size_t>((i / w1) * blocks + j / w2)];
    }
  }
  return phi;
}

GridField initial_solvation_profile(const PeriodicGrid& grid, double epsilon, double radius) {
  if (grid.dim() != 1) throw ConfigError("solvation initial condition needs a 1D grid");
  GridField phi(grid);
  for (long i = 0; i < grid.size(0); ++i) {
    const double x = grid.coordinate(0, i);
    phi[grid.wrap(i)] = 0.5 + 0.5 * std::tanh((std::abs(x) - radius) / (epsilon / 3.0));
  }
  return phi;
}

int count_bumps(const GridField& phi, double threshold) {
  const PeriodicGrid& g = phi.grid();
  const std::size_t n = g.num_cells();
  std::vector<char> seen(n, 0);
  std::vector<std::size_t> stack;
  int components = 0;
  const long n2 = g.dim() == 2 ? g.size(1) : 1;

  for (std::size_t start = 0; start < n; ++start) {
    if (seen[start] || !(phi[start] > threshold)) continue;
    ++components;
    seen[start] = 1;
    stack.push_back(start);
    while (!stack.empty()) {
      const std::size_t c = stack.back();
      stack.pop_back();
      const long i = static_cast<long>(c) / n2;
      const long j = static_cast<long>(c) % n2;
      std::size_t neighbours[4];
      int count = 0;
      neighbours[count++] = g.wrap(i - 1, j);
      neighbours[count++] = g.wrap(i + 1, j);
      if (g.dim() == 2) {
        neighbours[count++] = g.wrap(i, j - 1);
        neighbours[count++] = g.wrap(i, j + 1);
      }
      for (int k = 0; k < count; ++k) {
        const std::size_t q = neighbours[k];
        if (!seen[q] && phi[q] > threshold) {
          seen[q] = 1;
          stack.push_back(q);
        }
      }
    }
  }
  return components;
}

// ---------------------------------------------------------------------------

RateStudySetup RateStudySetup::table(Scale scale, double eps_cells) {
  RateStudySetup s;
  s.eps_cells = eps_cells;
  if (scale == Scale::Desk) {
    s.n = 128;
    s.bench_tau = 4e-6;
  } else {
    s.n = 256;
    s.bench_tau = 1e-6;
  }
  return s;
}

namespace {

long steps_to_horizon(double horizon, double tau) {
  const double exact = horizon / tau;
  const double rounded = std::round(exact);
  if (rounded < 1.0 || std::abs(exact - rounded) > 1e-9 * exact) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "tau=%.17g does not divide the horizon T=%.17g", tau, horizon);
    throw ConfigError(buf);
  }
  return static_cast<long>(rounded);
}

GridField solve_to_horizon(const RateStudySetup& s, const PeriodicGrid& grid, double tau) {
  const double eps = s.eps_cells * grid.spacing(0);
  Model model;
  model.params = {eps, s.gamma, s.penalty, s.omega, s.kappa, tau};
  model.op = LongRangeOp::inverse_laplacian();
  SemiImplicitStepper stepper(grid, model);
  SchemeState state(initial_tanh_disk(grid, s.omega, eps));
  const long steps = steps_to_horizon(s.horizon, tau);
  for (long n = 0; n < steps; ++n) stepper.advance(state);
  return std::move(state.phi);
}

}  // namespace

RateStudyResult rate_study(const RateStudySetup& s) {
  if (s.levels < 1) throw ConfigError("rate study: levels must be >= 1");
  if (!(s.bench_tau > 0.0) || !(s.base_tau > 0.0)) throw ConfigError("rate study: tau must be > 0");
  const PeriodicGrid grid = PeriodicGrid::square(s.n, s.half_extent);

  RateStudyResult result;
  for (int l = 0; l < s.levels; ++l) result.taus.push_back(s.base_tau / std::ldexp(1.0, l));
  steps_to_horizon(s.horizon, s.bench_tau);
  for (double tau : result.taus) steps_to_horizon(s.horizon, tau);

  // Slot 0 is the benchmark, slots 1.. the compared levels.
  std::vector<std::optional<GridField>> solutions(result.taus.size() + 1);
  parallel_for(solutions.size(), worker_threads(), [&](std::size_t i) {
    const double tau = i == 0 ? s.bench_tau : result.taus[i - 1];
    solutions[i] = solve_to_horizon(s, grid, tau);
  });

  const GridField& bench = *solutions[0];
  for (std::size_t l = 0; l < result.taus.size(); ++l) {
    GridField diff(grid);
    for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = (*solutions[l + 1])[i] - bench[i];
    result.errors.push_back(norm_l2_h(diff));
  }
  for (std::size_t l = 0; l + 1 < result.errors.size(); ++l) {
    result.rates.push_back(std::log2(result.errors[l] / result.errors[l + 1]));
  }
  return result;
}

std::string format_rate_table(const std::vector<std::pair<double, RateStudyResult>>& rows) {
  std::ostringstream out;
  out << "eps_h,tau,error,rate\n";
  char buf[128];
  for (const auto& [eps_cells, r] : rows) {
    for (std::size_t l = 0; l < r.taus.size(); ++l) {
      std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,", eps_cells, r.taus[l], r.errors[l]);
      out << buf;
      if (l > 0) {
        std::snprintf(buf, sizeof buf, "%.17g", r.rates[l - 1]);
        out << buf;
      }
      out << '\n';
    }
  }
  return out.str();
}

// ---------------------------------------------------------------------------

PeriodicGrid CoarseningPreset::grid() const {
  return dim == 1 ? PeriodicGrid::line(n, half_extent) : PeriodicGrid::square(n, half_extent);
}

Model CoarseningPreset::model() const {
  const double eps = eps_cells * 2.0 * half_extent / n;
  Model m;
  m.params = {eps, gamma, penalty, omega, kappa, tau};
  m.op = LongRangeOp::inverse_laplacian();
  return m;
}

CoarseningPreset coarsening_preset(std::string_view name, Scale scale) {
  CoarseningPreset p;
  p.name = std::string(name);
  const bool paper = scale == Scale::Paper;
  if (name == "g500" || name == "g2000") {
    p.dim = 1;
    p.n = 256;
    p.omega = 0.3;
    p.gamma = name == "g500" ? 500.0 : 2000.0;
    p.penalty = 2000.0;
    p.tau = 1e-3;
    p.horizon = paper ? 1000.0 : 100.0;
    p.snapshot_times = paper ? std::vector<double>{0, 10, 500, 1000}
                             : std::vector<double>{0, 10, 50, 100};
    p.record_stride = 100;
    p.monitor_stride = 1;
  } else if (name == "g1000_2d" || name == "g2000_2d") {
    p.dim = 2;
    p.n = paper ? 256 : 128;
    p.omega = 0.15;
    p.gamma = name == "g1000_2d" ? 1000.0 : 2000.0;
    p.penalty = 1e4;
    p.tau = 2e-4;
    p.horizon = paper ? 100.0 : 5.0;
    p.snapshot_times = paper ? std::vector<double>{0, 1, 10, 100} : std::vector<double>{0, 1, 5};
    p.record_stride = 50;
    p.monitor_stride = 10;
  } else {
    throw ConfigError("unknown coarsening preset '" + std::string(name) +
                      "' (expected g500|g2000|g1000_2d|g2000_2d)");
  }
  p.blocks = p.n / 8;
  return p;
}

CoarseningResult coarsening_run(const CoarseningPreset& preset) {
  const PeriodicGrid grid = preset.grid();
  const Model model = preset.model();
  SchemeState initial(
      initial_random_piecewise(grid, preset.init_lo, preset.init_hi, preset.blocks, preset.seed));

  CoarseningResult out{RunResult{initial, {}, {}, {}, false}, {}, 0};
  std::size_t next_snapshot = 0;
  RunOptions options;
  options.t_max = preset.horizon;
  options.tol = preset.tol;
  options.record_stride = preset.record_stride;
  options.monitor_stride = preset.monitor_stride;
  options.observer = [&](const SchemeState& s) {
    while (next_snapshot < preset.snapshot_times.size() &&
           s.time >= preset.snapshot_times[next_snapshot] - 0.5 * preset.tau) {
      out.snapshots.push_back({s.time, s.phi});
      ++next_snapshot;
    }
  };
  out.run = run(std::move(initial), model, options);
  out.bumps = count_bumps(out.run.state.phi);
  return out;
}

// ---------------------------------------------------------------------------

PeriodicGrid PvismSetup::grid() const { return PeriodicGrid::line(n, half_extent); }

Model PvismSetup::model(Nonlinearity f) const {
  const PeriodicGrid g = grid();
  Model m;
  m.params = {eps_cells * g.spacing(0), 0.0, 0.0, 0.5, kappa, tau};
  m.nonlinearity.kind = f;
  m.op = LongRangeOp::none();
  m.potential = pvism_potential(g, solutes, constants);
  return m;
}

PvismComparison pvism_compare(const PvismSetup& setup) {
  const PeriodicGrid grid = setup.grid();
  const double eps = setup.eps_cells * grid.spacing(0);
  const auto solve = [&](Nonlinearity f) {
    RunOptions options;
    options.t_max = setup.t_cap;
    options.tol = setup.tol;
    options.record_stride = 1000;
    options.monitor_stride = 10;
    RunResult r = run(SchemeState(initial_solvation_profile(grid, eps, setup.constants.cutoff)),
                      setup.model(f), options);
    const double lo = r.state.phi.min();
    const double hi = r.state.phi.max();
    return PvismOutcome{std::move(r.state.phi), lo, hi, r.state.step, r.reached_tolerance};
  };
  return {solve(Nonlinearity::CubicHermite), solve(Nonlinearity::Linear)};
}

}  // namespace pacok
