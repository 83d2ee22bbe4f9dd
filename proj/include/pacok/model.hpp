#pragma once

#include <optional>
#include <span>
#include <string_view>

#include "pacok/grid.hpp"
#include "pacok/spectral.hpp"

namespace pacok {

// Double-well potential W(s) = 18 (s^2 - s)^2 and its derivatives.
double double_well(double s) noexcept;
double double_well_prime(double s) noexcept;
double double_well_second(double s) noexcept;

enum class Nonlinearity {
  CubicHermite,  // f(s) = 3 s^2 - 2 s^3
  Linear,        // f(s) = s
};

std::string_view to_string(Nonlinearity kind);
Nonlinearity parse_nonlinearity(std::string_view name);

/// Indicator nonlinearity f. With `use_extension` the cubic is clamped to
/// 0 below 0 and 1 above 1 (derivatives vanish there); that variant exists
/// for the continuous theory only, discrete runs use the plain polynomial.
struct NonlinearSpec {
  Nonlinearity kind = Nonlinearity::CubicHermite;
  bool use_extension = false;

  double f(double s) const noexcept;
  double f_prime(double s) const noexcept;
  double f_second(double s) const noexcept;

  /// f'(0) = f'(1) = 0, i.e. the long-range forces vanish in pure phases.
  bool pins_pure_phases() const noexcept;
};

/// Sup norms over [0, 1] of W'', f' and f''.
struct LipschitzConstants {
  double w_second = 0.0;
  double f_prime = 0.0;
  double f_second = 0.0;
};

/// Computed by maximizing on a uniform 10^6-interval grid of [0, 1], which
/// contains the extremal points of every supported polynomial.
LipschitzConstants lipschitz_constants(const NonlinearSpec& spec);

struct ModelParams {
  double epsilon = 0.1;  // interface width
  double gamma = 0.0;    // long-range strength
  double penalty = 0.0;  // M, volume penalty
  double omega = 0.5;    // relative volume in (0, 1)
  double kappa = 0.0;    // stabilizer
  double tau = 1e-3;     // time step

  double omega_tilde() const noexcept { return omega > 1.0 - omega ? omega : 1.0 - omega; }
  /// Throws ConfigError naming the offending field.
  void validate() const;

  bool operator==(const ModelParams&) const = default;
};

/// Physical constants of the 1D solvation potential; defaults are the
/// water/single-ion values used in the pVISM comparison run.
struct SolvationConstants {
  double solvent_density = 0.0333;
  double lj_well_depth = 0.3;
  double lj_sigma = 3.5;
  double charge = 1.0;
  double vacuum_permittivity = 1.4321e-4;
  double solute_permittivity = 1.0;
  double solvent_permittivity = 80.0;
  double cutoff = 2.5;
};

/// U(x) = rho_w/(4 eps_LJ) [(s/r)^12 - (s/r)^6] + Q^2/(8 pi eps0) (1/eps_w - 1/eps_m) / r^2,
/// r = max(|x - nearest solute|, cutoff), distances measured on the torus.
double solvation_potential(double distance, const SolvationConstants& c = {});
GridField pvism_potential(const PeriodicGrid& grid, std::span<const double> solutes,
                          const SolvationConstants& c = {});

/// Everything that defines the right-hand side of the scheme.
///
/// With `potential` set (and op.kind == None) the long-range term is the
/// local solvation force U f'(phi) and the volume penalty is dropped.
struct Model {
  ModelParams params;
  NonlinearSpec nonlinearity;
  LongRangeOp op = LongRangeOp::inverse_laplacian();
  std::optional<GridField> potential;

  bool is_solvation() const noexcept { return potential.has_value(); }
  void validate(const PeriodicGrid& grid) const;
};

/// <f(phi) - omega, 1>_h, the Riemann sum of the volume deviation.
double volume_deviation(const GridField& phi, const NonlinearSpec& spec, double omega);

/// Explicit part of the scheme:
///   (1 + tau kappa/eps) phi - (tau/eps) W'(phi) - tau gamma L(f(phi) - omega) f'(phi)
///   - tau M <f(phi) - omega, 1>_h f'(phi).
/// Under the stability condition it maps [0,1]-valued fields into
/// [0, 1 + tau kappa/eps].
GridField assemble_rhs(const GridField& phi, const Model& model);

/// Cached form of assemble_rhs for repeated use on one grid.
class RhsAssembler {
 public:
  RhsAssembler(const PeriodicGrid& grid, const Model& model);

  void assemble(std::span<const double> phi, std::span<double> out);

 private:
  PeriodicGrid grid_;
  Model model_;
  std::optional<LongRangeApplier> applier_;
  std::vector<double> scratch_;
};

}  // namespace pacok
