#include "pacok/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "pacok/errors.hpp"

namespace pacok {

double double_well(double s) noexcept {
  const double q = s * s - s;
  return 18.0 * q * q;
}

double double_well_prime(double s) noexcept { return 36.0 * (s * s - s) * (2.0 * s - 1.0); }

double double_well_second(double s) noexcept { return 36.0 * (6.0 * s * s - 6.0 * s + 1.0); }

std::string_view to_string(Nonlinearity kind) {
  return kind == Nonlinearity::CubicHermite ? "cubic" : "linear";
}

Nonlinearity parse_nonlinearity(std::string_view name) {
  if (name == "cubic") return Nonlinearity::CubicHermite;
  if (name == "linear") return Nonlinearity::Linear;
  throw ConfigError("unknown f '" + std::string(name) + "' (expected cubic|linear)");
}

double NonlinearSpec::f(double s) const noexcept {
  if (kind == Nonlinearity::Linear) return s;
  if (use_extension) {
    if (s < 0.0) return 0.0;
    if (s > 1.0) return 1.0;
  }
  return s * s * (3.0 - 2.0 * s);
}

double NonlinearSpec::f_prime(double s) const noexcept {
  if (kind == Nonlinearity::Linear) return 1.0;
  if (use_extension && (s < 0.0 || s > 1.0)) return 0.0;
  return 6.0 * s * (1.0 - s);
}

double NonlinearSpec::f_second(double s) const noexcept {
  if (kind == Nonlinearity::Linear) return 0.0;
  if (use_extension && (s < 0.0 || s > 1.0)) return 0.0;
  return 6.0 - 12.0 * s;
}

bool NonlinearSpec::pins_pure_phases() const noexcept {
  return f_prime(0.0) == 0.0 && f_prime(1.0) == 0.0;
}

LipschitzConstants lipschitz_constants(const NonlinearSpec& spec) {
  constexpr int intervals = 1'000'000;
  LipschitzConstants c;
  for (int i = 0; i <= intervals; ++i) {
    const double s = static_cast<double>(i) / intervals;
    c.w_second = std::max(c.w_second, std::abs(double_well_second(s)));
    c.f_prime = std::max(c.f_prime, std::abs(spec.f_prime(s)));
    c.f_second = std::max(c.f_second, std::abs(spec.f_second(s)));
  }
  return c;
}

void ModelParams::validate() const {
  const auto need = [](bool ok, const char* what) {
    if (!ok) throw ConfigError(what);
  };
  need(std::isfinite(epsilon) && epsilon > 0.0, "epsilon must be > 0");
  need(std::isfinite(gamma) && gamma >= 0.0, "gamma must be >= 0");
  need(std::isfinite(penalty) && penalty >= 0.0, "M must be >= 0");
  need(std::isfinite(omega) && omega > 0.0 && omega < 1.0, "omega must lie in (0, 1)");
  need(std::isfinite(kappa) && kappa >= 0.0, "kappa must be >= 0");
  need(std::isfinite(tau) && tau > 0.0, "tau must be > 0");
}

double solvation_potential(double distance, const SolvationConstants& c) {
  const double r = std::max(std::abs(distance), c.cutoff);
  const double s6 = std::pow(c.lj_sigma / r, 6);
  const double lj = c.solvent_density / (4.0 * c.lj_well_depth) * (s6 * s6 - s6);
  const double born = c.charge * c.charge / (8.0 * std::numbers::pi * c.vacuum_permittivity) *
                      (1.0 / c.solvent_permittivity - 1.0 / c.solute_permittivity) / (r * r);
  return lj + born;
}

GridField pvism_potential(const PeriodicGrid& grid, std::span<const double> solutes,
                          const SolvationConstants& c) {
  if (solutes.empty()) throw ConfigError("pvism: at least one solute position is required");
  if (grid.dim() != 1) throw ConfigError("pvism: only 1D grids are supported");
  const double period = 2.0 * grid.half_extent(0);
  GridField u(grid);
  for (long i = 0; i < grid.size(0); ++i) {
    const double x = grid.coordinate(0, i);
    double nearest = std::numeric_limits<double>::infinity();
    for (double p : solutes) {
      double d = std::remainder(x - p, period);
      nearest = std::min(nearest, std::abs(d));
    }
    u[static_cast<std::size_t>(i)] = solvation_potential(nearest, c);
  }
  return u;
}

void Model::validate(const PeriodicGrid& grid) const {
  params.validate();
  op.validate();
  if (potential) {
    if (!(potential->grid() == grid)) throw ShapeError("solvation potential grid mismatch");
    if (op.kind != OperatorKind::None)
      throw ConfigError("a solvation potential requires operator = none");
  }
}

double volume_deviation(const GridField& phi, const NonlinearSpec& spec, double omega) {
  CompensatedSum acc;
  for (double v : phi.values()) acc.add(spec.f(v) - omega);
  return phi.grid().cell_measure() * acc.value();
}

GridField assemble_rhs(const GridField& phi, const Model& model) {
  RhsAssembler assembler(phi.grid(), model);
  GridField out(phi.grid());
  assembler.assemble(phi.values(), out.values());
  return out;
}

RhsAssembler::RhsAssembler(const PeriodicGrid& grid, const Model& model)
    : grid_(grid), model_(model), scratch_(grid.num_cells()) {
  model.validate(grid);
  if (model.op.kind != OperatorKind::None && model.params.gamma != 0.0) {
    applier_.emplace(model.op, grid);
  }
}

void RhsAssembler::assemble(std::span<const double> phi, std::span<double> out) {
  const ModelParams& p = model_.params;
  const NonlinearSpec& f = model_.nonlinearity;
  const std::size_t n = phi.size();
  const double a = 1.0 + p.tau * p.kappa / p.epsilon;
  const double c_well = p.tau / p.epsilon;

  for (std::size_t i = 0; i < n; ++i) {
    out[i] = a * phi[i] - c_well * double_well_prime(phi[i]);
  }

  if (model_.potential) {
    const auto u = model_.potential->values();
    for (std::size_t i = 0; i < n; ++i) out[i] -= p.tau * u[i] * f.f_prime(phi[i]);
    return;
  }

  CompensatedSum volume;
  for (std::size_t i = 0; i < n; ++i) {
    scratch_[i] = f.f(phi[i]) - p.omega;
    volume.add(scratch_[i]);
  }
  const double penalty_force = p.tau * p.penalty * grid_.cell_measure() * volume.value();

  if (applier_) {
    applier_->apply(scratch_, scratch_);
    const double c_long = p.tau * p.gamma;
    for (std::size_t i = 0; i < n; ++i) {
      out[i] -= (c_long * scratch_[i] + penalty_force) * f.f_prime(phi[i]);
    }
  } else {
    for (std::size_t i = 0; i < n; ++i) out[i] -= penalty_force * f.f_prime(phi[i]);
  }
}

}  // namespace pacok
