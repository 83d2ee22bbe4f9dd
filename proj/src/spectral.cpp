#include "pacok/spectral.hpp"

#include <cmath>
#include <numbers>

#include "pacok/errors.hpp"

namespace pacok {

std::string_view to_string(OperatorKind kind) {
  switch (kind) {
    case OperatorKind::None: return "none";
    case OperatorKind::InverseLaplacian: return "inverse_laplacian";
    case OperatorKind::Helmholtz: return "helmholtz";
    case OperatorKind::GarnetFilm: return "garnet";
    case OperatorKind::CustomSymbol: return "custom";
  }
  return "unknown";
}

OperatorKind parse_operator_kind(std::string_view name) {
  for (auto k : {OperatorKind::None, OperatorKind::InverseLaplacian, OperatorKind::Helmholtz,
                 OperatorKind::GarnetFilm, OperatorKind::CustomSymbol}) {
    if (to_string(k) == name) return k;
  }
  throw ConfigError("unknown operator '" + std::string(name) +
                    "' (expected none|inverse_laplacian|helmholtz|garnet|custom)");
}

void LongRangeOp::validate() const {
  switch (kind) {
    case OperatorKind::Helmholtz:
      if (!(helmholtz_length >= 0.0) || !std::isfinite(helmholtz_length))
        throw ConfigError("helmholtz length must be finite and >= 0");
      break;
    case OperatorKind::GarnetFilm:
      if (!(garnet_delta > 0.0) || !std::isfinite(garnet_delta))
        throw ConfigError("garnet film thickness delta must be finite and > 0");
      break;
    case OperatorKind::CustomSymbol:
      if (!table) throw ConfigError("custom operator requires a symbol table");
      for (const auto& [mode, value] : *table) {
        if (!std::isfinite(value) || value < 0.0)
          throw ConfigError("custom symbol must be finite and >= 0 at mode (" +
                            std::to_string(mode[0]) + "," + std::to_string(mode[1]) + ")");
      }
      break;
    default: break;
  }
}

double stencil_symbol(const PeriodicGrid& grid, int m1, int m2) {
  const double h1 = grid.spacing(0);
  const double s1 = std::sin(std::numbers::pi * m1 / grid.size(0));
  double value = 4.0 / (h1 * h1) * s1 * s1;
  if (grid.dim() == 2) {
    const double h2 = grid.spacing(1);
    const double s2 = std::sin(std::numbers::pi * m2 / grid.size(1));
    value += 4.0 / (h2 * h2) * s2 * s2;
  }
  return value;
}

double garnet_symbol(double delta, double wavenumber) {
  const double z = delta * wavenumber;
  if (z < 1e-8) return 1.0 - 0.5 * z;
  return -std::expm1(-z) / z;
}

namespace {

double lookup_custom(const SymbolTable& table, const PeriodicGrid& grid, int m1, int m2) {
  const auto mod = [](int k, int n) { return ((k % n) + n) % n; };
  const auto signed_mode = [](int k, int n) { return k <= n / 2 ? k : k - n; };
  const int n1 = grid.size(0);
  const int n2 = grid.dim() == 2 ? grid.size(1) : 1;

  // Value at +m and at -m, each accepted in either index convention.
  const auto find = [&](int a, int b) -> const double* {
    const int ua = mod(a, n1), ub = mod(b, n2);
    for (const std::array<int, 2> key : {std::array<int, 2>{ua, ub},
                                         std::array<int, 2>{signed_mode(ua, n1), signed_mode(ub, n2)}}) {
      if (auto it = table.find(key); it != table.end()) return &it->second;
    }
    return nullptr;
  };
  const double* plus = find(m1, m2);
  const double* minus = find(-m1, -m2);
  if (!plus && !minus) {
    throw ConfigError("custom symbol has no entry for mode (" + std::to_string(m1) + "," +
                      std::to_string(m2) + ")");
  }
  if (plus && minus && *plus != *minus) {
    throw ConfigError("custom symbol must be even: modes (" + std::to_string(m1) + "," +
                      std::to_string(m2) + ") and its negative differ");
  }
  return plus ? *plus : *minus;
}

}  // namespace

std::vector<double> operator_symbol(const LongRangeOp& op, const PeriodicGrid& grid) {
  op.validate();
  FourierTransform layout(grid);
  std::vector<double> symbol(layout.spectrum_size(), 0.0);
  for (std::size_t k = 0; k < symbol.size(); ++k) {
    const auto [m1, m2] = layout.mode(k);
    switch (op.kind) {
      case OperatorKind::None: symbol[k] = 0.0; break;
      case OperatorKind::InverseLaplacian: {
        const double lam = stencil_symbol(grid, m1, m2);
        symbol[k] = (m1 == 0 && m2 == 0) ? 0.0 : 1.0 / lam;
        break;
      }
      case OperatorKind::Helmholtz: {
        const double l = op.helmholtz_length;
        symbol[k] = 1.0 / (1.0 + l * l * stencil_symbol(grid, m1, m2));
        break;
      }
      case OperatorKind::GarnetFilm: {
        const double k1 = std::numbers::pi * m1 / grid.half_extent(0);
        const double k2 = grid.dim() == 2 ? std::numbers::pi * m2 / grid.half_extent(1) : 0.0;
        symbol[k] = garnet_symbol(op.garnet_delta, std::hypot(k1, k2));
        break;
      }
      case OperatorKind::CustomSymbol:
        symbol[k] = lookup_custom(*op.table, grid, m1, m2);
        break;
    }
  }
  return symbol;
}

GridField apply_laplacian(const GridField& a) {
  const PeriodicGrid& g = a.grid();
  GridField out(g);
  const double c1 = 1.0 / (g.spacing(0) * g.spacing(0));
  if (g.dim() == 1) {
    for (long i = 0; i < g.size(0); ++i) {
      out[g.wrap(i)] = c1 * (a.at(i - 1) - 2.0 * a.at(i) + a.at(i + 1));
    }
    return out;
  }
  const double c2 = 1.0 / (g.spacing(1) * g.spacing(1));
  for (long i = 0; i < g.size(0); ++i) {
    for (long j = 0; j < g.size(1); ++j) {
      const double u = a.at(i, j);
      out[g.wrap(i, j)] = c1 * (a.at(i - 1, j) - 2.0 * u + a.at(i + 1, j)) +
                          c2 * (a.at(i, j - 1) - 2.0 * u + a.at(i, j + 1));
    }
  }
  return out;
}

GridField apply_inv_neg_laplacian(const GridField& a) {
  return apply_long_range(LongRangeOp::inverse_laplacian(), a);
}

GridField apply_long_range(const LongRangeOp& op, const GridField& a) {
  if (op.kind == OperatorKind::None) {
    throw ConfigError("apply_long_range: operator kind 'none' has no action");
  }
  LongRangeApplier applier(op, a.grid());
  return applier.apply(a);
}

double estimate_linf_norm(const LongRangeOp& op, const PeriodicGrid& grid) {
  if (op.kind == OperatorKind::None) return 0.0;
  GridField impulse(grid);
  impulse[0] = 1.0;
  const GridField response = apply_long_range(op, impulse);
  CompensatedSum acc;
  for (double v : response.values()) acc.add(std::abs(v));
  return acc.value();
}

LongRangeApplier::LongRangeApplier(const LongRangeOp& op, const PeriodicGrid& grid)
    : transform_(grid), symbol_(operator_symbol(op, grid)) {}

void LongRangeApplier::apply(std::span<const double> in, std::span<double> out) {
  transform_.apply_multiplier(symbol_, in, out);
}

GridField LongRangeApplier::apply(const GridField& a) {
  if (!(a.grid() == transform_.grid())) throw ShapeError("LongRangeApplier: grid mismatch");
  GridField out(a.grid());
  apply(a.values(), out.values());
  return out;
}

}  // namespace pacok
