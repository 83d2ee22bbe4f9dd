#pragma once

#include <functional>
#include <string>
#include <vector>

#include "pacok/energy.hpp"
#include "pacok/fourier.hpp"
#include "pacok/grid.hpp"
#include "pacok/model.hpp"

namespace pacok {

/// Absolute slack allowed on the [0, 1] bounds (DFT round-trip roundoff).
inline constexpr double kMppTolerance = 1e-10;
/// Energy may rise by at most this times (1 + |E|) between monitored steps.
inline constexpr double kEnergyTolerance = 1e-9;

struct SchemeState {
  explicit SchemeState(GridField initial) : phi(std::move(initial)) {}

  GridField phi;
  long step = 0;
  double time = 0.0;
  double last_increment_linf = 0.0;
};

/// Sufficient conditions for the discrete maximum principle and for energy
/// decay, evaluated for one model on one grid.
///
///   MPP: 1/tau + kappa/eps >= L_W''/eps + omega~ L_f'' C
///   ES:  kappa/eps         >= L_W''/eps + (L_f'^2 + omega~ L_f'') C
///
/// with C = gamma ||L|| + M |T^d|. For the solvation model C = ||U||_inf and
/// omega~ is replaced by 1. When f does not vanish to first
/// order at 0 and 1 and the interaction is nonzero, no stabilizer suffices
/// and both right-hand sides are +infinity.
struct ConditionReport {
  LipschitzConstants lipschitz;
  double op_norm = 0.0;
  double mpp_lhs = 0.0;
  double mpp_rhs = 0.0;
  double es_lhs = 0.0;
  double es_rhs = 0.0;
  bool mpp_ok = false;
  bool es_ok = false;
  double kappa_min_mpp = 0.0;
  double kappa_min_es = 0.0;
};

ConditionReport check_conditions(const Model& model, const PeriodicGrid& grid);

/// Aligned, human-readable rendering of a report.
std::string format_report(const ConditionReport& report);

/// First-order stabilized semi-implicit step
///   ((1 + tau kappa/eps) I - tau eps Delta_h) phi^{n+1} = RHS(phi^n),
/// solved exactly in Fourier space.
class SemiImplicitStepper {
 public:
  SemiImplicitStepper(const PeriodicGrid& grid, Model model);

  /// Advances in place. Throws NumericalBlowup if the iterate is not finite.
  void advance(SchemeState& state);
  SchemeState step(const SchemeState& state);

  const Model& model() const noexcept { return model_; }
  const PeriodicGrid& grid() const noexcept { return grid_; }
  /// Smallest solve denominator over all modes; >= 1 by construction.
  double min_denominator() const noexcept { return min_denominator_; }

 private:
  PeriodicGrid grid_;
  Model model_;
  RhsAssembler rhs_;
  FourierTransform transform_;
  std::vector<double> inverse_denominator_;
  std::vector<double> rhs_buffer_;
  std::vector<double> next_;
  double min_denominator_ = 0.0;
};

SchemeState step(const SchemeState& state, const Model& model);

struct StepRecord {
  long n = 0;
  double t = 0.0;
  double min = 0.0;
  double max = 0.0;
  double energy = 0.0;
  double increment = 0.0;

  bool operator==(const StepRecord&) const = default;
};

struct RunOptions {
  double t_max = 1.0;
  /// Stop once ||phi^{n+1} - phi^n||_inf / tau <= tol; negative disables.
  double tol = 1e-3;
  long record_stride = 1;
  /// Energy is checked every `monitor_stride` steps.
  long monitor_stride = 1;
  /// Called with the initial state and after every step.
  std::function<void(const SchemeState&)> observer;
};

struct MonitorReport {
  long bound_violations = 0;
  double worst_bound_excess = 0.0;
  long energy_increases = 0;
  double worst_energy_increase = 0.0;

  bool clean() const noexcept { return bound_violations == 0 && energy_increases == 0; }
};

struct RunResult {
  SchemeState state;
  std::vector<StepRecord> records;
  ConditionReport conditions;
  MonitorReport monitors;
  bool reached_tolerance = false;
};

/// Iterates until t >= t_max or the increment criterion is met.
///
/// Bound and energy monitors always count violations. When the initial
/// field lies in [0, 1] and the matching condition is satisfied, a
/// violation is a broken guarantee and throws InvariantViolation.
RunResult run(SchemeState initial, const Model& model, const RunOptions& options);

}  // namespace pacok
