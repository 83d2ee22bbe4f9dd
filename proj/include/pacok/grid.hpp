#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "pacok/errors.hpp"

namespace pacok {

/// Uniform periodic lattice on the torus prod_i [-X_i, X_i), d = 1 or 2.
///
/// Cell k along axis i sits at x = -X_i + k h_i with h_i = 2 X_i / N_i.
/// Storage order for 2D is row-major: index = k1 * N2 + k2.
class PeriodicGrid {
 public:
  PeriodicGrid(std::vector<int> sizes, std::vector<double> half_extents);

  static PeriodicGrid line(int n, double half_extent = 1.0);
  static PeriodicGrid square(int n, double half_extent = 1.0);

  int dim() const noexcept { return dim_; }
  int size(int axis) const { return sizes_.at(static_cast<std::size_t>(axis)); }
  double half_extent(int axis) const {
    return half_extents_.at(static_cast<std::size_t>(axis));
  }
  double spacing(int axis) const {
    return spacings_.at(static_cast<std::size_t>(axis));
  }
  /// dx = prod h_i.
  double cell_measure() const noexcept { return cell_measure_; }
  /// |T^d| = prod 2 X_i.
  double measure() const noexcept { return measure_; }
  std::size_t num_cells() const noexcept { return num_cells_; }

  double coordinate(int axis, long k) const;

  /// Flat index of (k1, k2) with periodic wrap of both indices; k2 is
  /// ignored for 1D grids.
  std::size_t wrap(long k1, long k2 = 0) const;

  bool operator==(const PeriodicGrid& other) const = default;

 private:
  int dim_ = 1;
  std::array<int, 2> sizes_{1, 1};
  std::array<double, 2> half_extents_{0.0, 0.0};
  std::array<double, 2> spacings_{0.0, 0.0};
  double cell_measure_ = 0.0;
  double measure_ = 0.0;
  std::size_t num_cells_ = 0;
};

/// Real grid function. Values are always finite.
class GridField {
 public:
  explicit GridField(PeriodicGrid grid, double fill = 0.0);
  GridField(PeriodicGrid grid, std::vector<double> values);

  const PeriodicGrid& grid() const noexcept { return grid_; }
  std::size_t size() const noexcept { return values_.size(); }

  std::span<const double> values() const noexcept { return values_; }
  std::span<double> values() noexcept { return values_; }

  double operator[](std::size_t i) const { return values_[i]; }
  double& operator[](std::size_t i) { return values_[i]; }

  /// Periodic access: at(k + m N) == at(k) for every integer m.
  double at(long k1, long k2 = 0) const { return values_[grid_.wrap(k1, k2)]; }

  bool all_finite() const noexcept;
  double min() const;
  double max() const;

 private:
  PeriodicGrid grid_;
  std::vector<double> values_;
};

/// Compensated (Neumaier) summation; fixed order, so results are
/// reproducible bit for bit.
class CompensatedSum {
 public:
  void add(double x) noexcept;
  double value() const noexcept { return sum_ + compensation_; }

 private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
};

double compensated_sum(std::span<const double> xs) noexcept;

void require_same_grid(const GridField& a, const GridField& b);

/// <a, b>_h = dx * sum_i a_i b_i
double inner_product_h(const GridField& a, const GridField& b);
double norm_l2_h(const GridField& a);
double norm_linf_h(const GridField& a);
/// <a, 1>_h / |T^d|
double mean_h(const GridField& a);

/// Circular shift by (s1, s2) cells: out(k) = a(k - s).
GridField circular_shift(const GridField& a, long s1, long s2 = 0);

}  // namespace pacok
