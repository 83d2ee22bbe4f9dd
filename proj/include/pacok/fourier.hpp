#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <span>

#include "pacok/grid.hpp"

namespace pacok {

/// Real-to-half-complex DFT on a periodic grid, backed by FFTW.
///
/// The half spectrum has N/2+1 entries in 1D and N1 x (N2/2+1) entries in
/// 2D (row-major). Plans are shared between instances of the same shape;
/// scratch buffers are per instance, so one instance must not be used from
/// two threads at once.
class FourierTransform {
 public:
  explicit FourierTransform(const PeriodicGrid& grid);
  ~FourierTransform();
  FourierTransform(const FourierTransform&) = delete;
  FourierTransform& operator=(const FourierTransform&) = delete;
  FourierTransform(FourierTransform&&) noexcept;
  FourierTransform& operator=(FourierTransform&&) noexcept;

  const PeriodicGrid& grid() const noexcept { return grid_; }
  std::size_t spectrum_size() const noexcept { return spectrum_size_; }

  /// Signed mode numbers (m1, m2) of half-spectrum entry `index`;
  /// m2 is 0 in 1D.
  std::array<int, 2> mode(std::size_t index) const;

  void forward(std::span<const double> in, std::span<std::complex<double>> out);
  /// Unnormalized inverse is divided by the number of cells, so
  /// inverse(forward(a)) == a up to roundoff.
  void inverse(std::span<const std::complex<double>> in, std::span<double> out);

  /// out = IDFT(symbol .* DFT(in)); `symbol` is laid out like the half
  /// spectrum. `in` and `out` may alias.
  void apply_multiplier(std::span<const double> symbol, std::span<const double> in,
                        std::span<double> out);

  struct Plans;  // FFTW plan pair, opaque outside fourier.cpp

 private:
  PeriodicGrid grid_;
  std::size_t spectrum_size_ = 0;
  std::shared_ptr<const Plans> plans_;
  double* real_buf_ = nullptr;
  std::complex<double>* spec_buf_ = nullptr;
};

}  // namespace pacok
