#pragma once

#include <array>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pacok/fourier.hpp"
#include "pacok/grid.hpp"

namespace pacok {

enum class OperatorKind { None, InverseLaplacian, Helmholtz, GarnetFilm, CustomSymbol };

std::string_view to_string(OperatorKind kind);
OperatorKind parse_operator_kind(std::string_view name);

/// Fourier symbol keyed by mode numbers (m1, m2); m2 = 0 in 1D. Keys may be
/// given in [0, N) or in signed form; lookups try both.
using SymbolTable = std::map<std::array<int, 2>, double>;

/// Positive semi-definite long-range operator L, described by its action on
/// Fourier modes. The interaction strength is not part of the operator.
struct LongRangeOp {
  OperatorKind kind = OperatorKind::InverseLaplacian;
  /// Helmholtz: L = (I - l^2 Delta_h)^{-1}.
  double helmholtz_length = 0.0;
  /// Garnet film: lambda(k) = (1 - exp(-delta |k|)) / (delta |k|).
  double garnet_delta = 0.0;
  std::shared_ptr<const SymbolTable> table;

  static LongRangeOp none() { return {OperatorKind::None, 0.0, 0.0, nullptr}; }
  static LongRangeOp inverse_laplacian() {
    return {OperatorKind::InverseLaplacian, 0.0, 0.0, nullptr};
  }
  static LongRangeOp helmholtz(double length) {
    return {OperatorKind::Helmholtz, length, 0.0, nullptr};
  }
  static LongRangeOp garnet_film(double delta) {
    return {OperatorKind::GarnetFilm, 0.0, delta, nullptr};
  }
  static LongRangeOp custom(SymbolTable table) {
    return {OperatorKind::CustomSymbol, 0.0, 0.0,
            std::make_shared<const SymbolTable>(std::move(table))};
  }

  void validate() const;
};

/// (4/h1^2) sin^2(pi m1/N1) + (4/h2^2) sin^2(pi m2/N2): minus the eigenvalue
/// of the periodic 3/5-point Laplacian on mode (m1, m2).
double stencil_symbol(const PeriodicGrid& grid, int m1, int m2 = 0);

/// Garnet-film eigenvalue at physical wavenumber magnitude |k|, with the
/// continuous limit 1 at k = 0.
double garnet_symbol(double delta, double wavenumber);

/// Symbol of `op` laid out on the half spectrum of `grid`. Throws
/// ConfigError if a custom table misses a mode or is not even.
std::vector<double> operator_symbol(const LongRangeOp& op, const PeriodicGrid& grid);

GridField apply_laplacian(const GridField& a);
/// u with -Delta_h u = a - mean_h(a) and mean_h(u) = 0.
GridField apply_inv_neg_laplacian(const GridField& a);
GridField apply_long_range(const LongRangeOp& op, const GridField& a);

/// L-infinity operator norm of L: the max absolute row sum of its circulant
/// matrix, computed as the absolute sum of the response to a unit impulse.
double estimate_linf_norm(const LongRangeOp& op, const PeriodicGrid& grid);

/// Reusable application of one operator on one grid (cached symbol and
/// transform). Not safe for concurrent use of a single instance.
class LongRangeApplier {
 public:
  LongRangeApplier(const LongRangeOp& op, const PeriodicGrid& grid);

  void apply(std::span<const double> in, std::span<double> out);
  GridField apply(const GridField& a);
  std::span<const double> symbol() const noexcept { return symbol_; }

 private:
  FourierTransform transform_;
  std::vector<double> symbol_;
};

}  // namespace pacok
