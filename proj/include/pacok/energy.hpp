#pragma once

#include <optional>

#include "pacok/grid.hpp"
#include "pacok/model.hpp"

namespace pacok {

/// Terms of the discrete penalized energy
///   E_h = -eps/2 <Delta_h phi, phi>_h + 1/eps <W(phi), 1>_h
///         + gamma/2 <L(f - omega), f - omega>_h + M/2 <f - omega, 1>_h^2
/// and, for solvation models, <f(phi) U, 1>_h in place of the last two.
struct EnergyBreakdown {
  double interfacial = 0.0;
  double well = 0.0;
  double longrange = 0.0;
  double penalty = 0.0;
  double solvation = 0.0;
  double total = 0.0;
};

EnergyBreakdown discrete_energy(const GridField& phi, const Model& model);

/// Repeated evaluation on one grid (the monitor path).
class EnergyEvaluator {
 public:
  EnergyEvaluator(const PeriodicGrid& grid, const Model& model);

  EnergyBreakdown evaluate(const GridField& phi);

 private:
  Model model_;
  std::optional<LongRangeApplier> applier_;
};

}  // namespace pacok
