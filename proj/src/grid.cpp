#include "pacok/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace pacok {

PeriodicGrid::PeriodicGrid(std::vector<int> sizes, std::vector<double> half_extents) {
  if (sizes.empty() || sizes.size() != half_extents.size()) {
    throw ConfigError("grid: sizes and half extents must be non-empty and of equal length");
  }
  if (sizes.size() > 2) {
    throw ConfigError("grid: only 1D and 2D grids are supported, got dim=" +
                      std::to_string(sizes.size()));
  }
  dim_ = static_cast<int>(sizes.size());
  cell_measure_ = 1.0;
  measure_ = 1.0;
  num_cells_ = 1;
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    const int n = sizes[i];
    const double x = half_extents[i];
    if (n < 4 || n % 2 != 0) {
      throw ConfigError("grid: N must be even and >= 4, got " + std::to_string(n));
    }
    if (!(x > 0.0) || !std::isfinite(x)) {
      throw ConfigError("grid: half extent must be positive and finite");
    }
    sizes_[i] = n;
    half_extents_[i] = x;
    spacings_[i] = 2.0 * x / n;
    cell_measure_ *= spacings_[i];
    measure_ *= 2.0 * x;
    num_cells_ *= static_cast<std::size_t>(n);
  }
}

PeriodicGrid PeriodicGrid::line(int n, double half_extent) {
  return PeriodicGrid({n}, {half_extent});
}

PeriodicGrid PeriodicGrid::square(int n, double half_extent) {
  return PeriodicGrid({n, n}, {half_extent, half_extent});
}

double PeriodicGrid::coordinate(int axis, long k) const {
  return -half_extent(axis) + static_cast<double>(k) * spacing(axis);
}

std::size_t PeriodicGrid::wrap(long k1, long k2) const {
  const auto mod = [](long k, long n) { return ((k % n) + n) % n; };
  const long i = mod(k1, sizes_[0]);
  if (dim_ == 1) return static_cast<std::size_t>(i);
  const long j = mod(k2, sizes_[1]);
  return static_cast<std::size_t>(i * sizes_[1] + j);
}

GridField::GridField(PeriodicGrid grid, double fill)
    : grid_(std::move(grid)), values_(grid_.num_cells(), fill) {
  if (!std::isfinite(fill)) throw std::invalid_argument("GridField: non-finite fill value");
}

GridField::GridField(PeriodicGrid grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (values_.size() != grid_.num_cells()) {
    throw ShapeError("GridField: expected " + std::to_string(grid_.num_cells()) +
                     " values, got " + std::to_string(values_.size()));
  }
  if (!all_finite()) throw std::invalid_argument("GridField: non-finite value");
}

bool GridField::all_finite() const noexcept {
  return std::all_of(values_.begin(), values_.end(),
                     [](double v) { return std::isfinite(v); });
}

double GridField::min() const { return *std::min_element(values_.begin(), values_.end()); }
double GridField::max() const { return *std::max_element(values_.begin(), values_.end()); }

void CompensatedSum::add(double x) noexcept {
  const double t = sum_ + x;
  if (std::abs(sum_) >= std::abs(x)) {
    compensation_ += (sum_ - t) + x;
  } else {
    compensation_ += (x - t) + sum_;
  }
  sum_ = t;
}

double compensated_sum(std::span<const double> xs) noexcept {
  CompensatedSum acc;
  for (double x : xs) acc.add(x);
  return acc.value();
}

void require_same_grid(const GridField& a, const GridField& b) {
  if (!(a.grid() == b.grid())) throw ShapeError("grid mismatch between fields");
}

double inner_product_h(const GridField& a, const GridField& b) {
  require_same_grid(a, b);
  CompensatedSum acc;
  const auto x = a.values();
  const auto y = b.values();
  for (std::size_t i = 0; i < x.size(); ++i) acc.add(x[i] * y[i]);
  return a.grid().cell_measure() * acc.value();
}

double norm_l2_h(const GridField& a) { return std::sqrt(inner_product_h(a, a)); }

double norm_linf_h(const GridField& a) {
  double m = 0.0;
  for (double v : a.values()) m = std::max(m, std::abs(v));
  return m;
}

double mean_h(const GridField& a) {
  return a.grid().cell_measure() * compensated_sum(a.values()) / a.grid().measure();
}

GridField circular_shift(const GridField& a, long s1, long s2) {
  const PeriodicGrid& g = a.grid();
  GridField out(g);
  if (g.dim() == 1) {
    for (long i = 0; i < g.size(0); ++i) out[g.wrap(i)] = a.at(i - s1);
  } else {
    for (long i = 0; i < g.size(0); ++i) {
      for (long j = 0; j < g.size(1); ++j) out[g.wrap(i, j)] = a.at(i - s1, j - s2);
    }
  }
  return out;
}

}  // namespace pacok
