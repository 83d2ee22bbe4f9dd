#include "pacok/stepper.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "pacok/errors.hpp"
#include "pacok/spectral.hpp"

namespace pacok {

ConditionReport check_conditions(const Model& model, const PeriodicGrid& grid) {
  model.validate(grid);
  const ModelParams& p = model.params;
  ConditionReport r;
  r.lipschitz = lipschitz_constants(model.nonlinearity);
  const LipschitzConstants& L = r.lipschitz;

  double mpp_interaction = 0.0;
  double es_interaction = 0.0;
  if (model.potential) {
    const double bound = norm_linf_h(*model.potential);
    r.op_norm = 0.0;
    mpp_interaction = L.f_second * bound;
    es_interaction = (L.f_prime * L.f_prime + L.f_second) * bound;
  } else {
    r.op_norm = p.gamma != 0.0 ? estimate_linf_norm(model.op, grid) : 0.0;
    const double coupling = p.gamma * r.op_norm + p.penalty * grid.measure();
    mpp_interaction = p.omega_tilde() * L.f_second * coupling;
    es_interaction = (L.f_prime * L.f_prime + p.omega_tilde() * L.f_second) * coupling;
  }

  const bool interacting = model.potential
                               ? norm_linf_h(*model.potential) > 0.0
                               : (p.gamma * r.op_norm + p.penalty) > 0.0;
  const bool hypotheses_hold = !interacting || model.nonlinearity.pins_pure_phases();
  const double inf = std::numeric_limits<double>::infinity();

  r.mpp_lhs = 1.0 / p.tau + p.kappa / p.epsilon;
  r.mpp_rhs = hypotheses_hold ? L.w_second / p.epsilon + mpp_interaction : inf;
  r.es_lhs = p.kappa / p.epsilon;
  r.es_rhs = hypotheses_hold ? L.w_second / p.epsilon + es_interaction : inf;
  r.mpp_ok = r.mpp_lhs >= r.mpp_rhs;
  r.es_ok = r.es_lhs >= r.es_rhs;
  r.kappa_min_mpp = hypotheses_hold ? std::max(0.0, p.epsilon * (r.mpp_rhs - 1.0 / p.tau)) : inf;
  r.kappa_min_es = hypotheses_hold ? p.epsilon * r.es_rhs : inf;
  return r;
}

std::string format_report(const ConditionReport& r) {
  std::ostringstream out;
  char line[160];
  const auto row = [&](const char* name, double v) {
    std::snprintf(line, sizeof line, "%-16s %.10g\n", name, v);
    out << line;
  };
  row("L_W''", r.lipschitz.w_second);
  row("L_f'", r.lipschitz.f_prime);
  row("L_f''", r.lipschitz.f_second);
  row("op_norm", r.op_norm);
  std::snprintf(line, sizeof line, "%-16s lhs=%-16.10g rhs=%-16.10g %s  kappa_min=%.10g\n",
                "mpp", r.mpp_lhs, r.mpp_rhs, r.mpp_ok ? "ok  " : "FAIL", r.kappa_min_mpp);
  out << line;
  std::snprintf(line, sizeof line, "%-16s lhs=%-16.10g rhs=%-16.10g %s  kappa_min=%.10g\n",
                "energy", r.es_lhs, r.es_rhs, r.es_ok ? "ok  " : "FAIL", r.kappa_min_es);
  out << line;
  return out.str();
}

SemiImplicitStepper::SemiImplicitStepper(const PeriodicGrid& grid, Model model)
    : grid_(grid),
      model_(std::move(model)),
      rhs_(grid_, model_),
      transform_(grid_),
      rhs_buffer_(grid_.num_cells()),
      next_(grid_.num_cells()) {
  const ModelParams& p = model_.params;
  const double a = 1.0 + p.tau * p.kappa / p.epsilon;
  inverse_denominator_.resize(transform_.spectrum_size());
  min_denominator_ = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < inverse_denominator_.size(); ++k) {
    const auto [m1, m2] = transform_.mode(k);
    const double d = a + p.tau * p.epsilon * stencil_symbol(grid_, m1, m2);
    min_denominator_ = std::min(min_denominator_, d);
    inverse_denominator_[k] = 1.0 / d;
  }
}

void SemiImplicitStepper::advance(SchemeState& state) {
  if (!(state.phi.grid() == grid_)) throw ShapeError("stepper: state grid mismatch");
  auto phi = state.phi.values();
  rhs_.assemble(phi, rhs_buffer_);
  transform_.apply_multiplier(inverse_denominator_, rhs_buffer_, next_);

  double increment = 0.0;
  for (std::size_t i = 0; i < next_.size(); ++i) {
    if (!std::isfinite(next_[i])) {
      throw NumericalBlowup(state.step + 1, "non-finite value in the iterate");
    }
    increment = std::max(increment, std::abs(next_[i] - phi[i]));
    phi[i] = next_[i];
  }
  state.step += 1;
  state.time = static_cast<double>(state.step) * model_.params.tau;
  state.last_increment_linf = increment;
}

SchemeState SemiImplicitStepper::step(const SchemeState& state) {
  SchemeState next = state;
  advance(next);
  return next;
}

SchemeState step(const SchemeState& state, const Model& model) {
  SemiImplicitStepper stepper(state.phi.grid(), model);
  return stepper.step(state);
}

namespace {

bool within_unit_interval(const GridField& phi) {
  return phi.min() >= 0.0 && phi.max() <= 1.0;
}

std::string describe(long n, const char* what, double v) {
  char buf[128];
  std::snprintf(buf, sizeof buf, "step %ld: %s (%.3e)", n, what, v);
  return buf;
}

}  // namespace

RunResult run(SchemeState initial, const Model& model, const RunOptions& options) {
  if (!(options.t_max > 0.0)) throw ConfigError("run: T must be > 0");
  if (options.record_stride < 1 || options.monitor_stride < 1)
    throw ConfigError("run: strides must be >= 1");

  const PeriodicGrid grid = initial.phi.grid();
  SemiImplicitStepper stepper(grid, model);
  EnergyEvaluator energy(grid, model);
  const double tau = model.params.tau;
  const long max_steps =
      std::max(1L, static_cast<long>(std::ceil(options.t_max / tau - 1e-9)));

  RunResult result{std::move(initial), {}, check_conditions(model, grid), {}, false};
  SchemeState& state = result.state;
  const bool starts_bounded = within_unit_interval(state.phi);
  const bool enforce_bounds = starts_bounded && result.conditions.mpp_ok;
  const bool enforce_energy = starts_bounded && result.conditions.es_ok;

  double monitored_energy = energy.evaluate(state.phi).total;
  const auto record = [&](double e) {
    result.records.push_back({state.step, state.time, state.phi.min(), state.phi.max(), e,
                              state.last_increment_linf});
  };
  record(monitored_energy);
  if (options.observer) options.observer(state);

  MonitorReport& mon = result.monitors;
  const long start = state.step;
  while (state.step - start < max_steps) {
    stepper.advance(state);
    const long n = state.step - start;

    if (starts_bounded) {
      const double excess = std::max(-state.phi.min(), state.phi.max() - 1.0);
      if (excess > kMppTolerance) {
        ++mon.bound_violations;
        mon.worst_bound_excess = std::max(mon.worst_bound_excess, excess);
        if (enforce_bounds) {
          throw InvariantViolation(
              describe(state.step, "iterate left [0,1] although the MPP condition holds", excess));
        }
      }
    }

    const bool converged = options.tol >= 0.0 && state.last_increment_linf / tau <= options.tol;
    const bool last = converged || n == max_steps;
    const bool monitor_now = n % options.monitor_stride == 0 || last;
    const bool record_now = n % options.record_stride == 0 || last;

    double e = std::numeric_limits<double>::quiet_NaN();
    if (monitor_now || record_now) e = energy.evaluate(state.phi).total;
    if (monitor_now) {
      const double rise = e - monitored_energy;
      if (rise > kEnergyTolerance * (1.0 + std::abs(monitored_energy))) {
        ++mon.energy_increases;
        mon.worst_energy_increase = std::max(mon.worst_energy_increase, rise);
        if (enforce_energy) {
          throw InvariantViolation(
              describe(state.step, "energy increased although the stability condition holds", rise));
        }
      }
      monitored_energy = e;
    }
    if (record_now) record(e);
    if (options.observer) options.observer(state);
    if (converged) {
      result.reached_tolerance = true;
      break;
    }
  }
  return result;
}

}  // namespace pacok
