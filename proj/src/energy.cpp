#include "pacok/energy.hpp"

namespace pacok {

EnergyBreakdown discrete_energy(const GridField& phi, const Model& model) {
  EnergyEvaluator evaluator(phi.grid(), model);
  return evaluator.evaluate(phi);
}

EnergyEvaluator::EnergyEvaluator(const PeriodicGrid& grid, const Model& model) : model_(model) {
  model.validate(grid);
  if (model.op.kind != OperatorKind::None && model.params.gamma != 0.0) {
    applier_.emplace(model.op, grid);
  }
}

EnergyBreakdown EnergyEvaluator::evaluate(const GridField& phi) {
  const ModelParams& p = model_.params;
  const NonlinearSpec& f = model_.nonlinearity;
  const double dx = phi.grid().cell_measure();
  EnergyBreakdown e;

  const GridField lap = apply_laplacian(phi);
  e.interfacial = -0.5 * p.epsilon * inner_product_h(lap, phi);

  CompensatedSum well;
  for (double v : phi.values()) well.add(double_well(v));
  e.well = dx * well.value() / p.epsilon;

  if (model_.potential) {
    CompensatedSum solv;
    const auto u = model_.potential->values();
    const auto x = phi.values();
    for (std::size_t i = 0; i < x.size(); ++i) solv.add(f.f(x[i]) * u[i]);
    e.solvation = dx * solv.value();
  } else {
    GridField g(phi.grid());
    for (std::size_t i = 0; i < g.size(); ++i) g[i] = f.f(phi[i]) - p.omega;
    if (applier_) e.longrange = 0.5 * p.gamma * inner_product_h(applier_->apply(g), g);
    const double volume = dx * compensated_sum(g.values());
    e.penalty = 0.5 * p.penalty * volume * volume;
  }

  e.total = e.interfacial + e.well + e.longrange + e.penalty + e.solvation;
  return e;
}

}  // namespace pacok
