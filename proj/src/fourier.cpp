#include "pacok/fourier.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <new>
#include <tuple>

namespace pacok {

struct FourierTransform::Plans {
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;

  Plans() = default;
  Plans(const Plans&) = delete;
  Plans& operator=(const Plans&) = delete;
  ~Plans() {
    if (forward) fftw_destroy_plan(forward);
    if (backward) fftw_destroy_plan(backward);
  }
};

namespace {

// The FFTW planner is not thread-safe; executing an existing plan on new
// arrays is. FFTW_ESTIMATE keeps the chosen algorithm, and therefore the
// roundoff, identical from run to run.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

using ShapeKey = std::tuple<int, int, int>;

std::map<ShapeKey, std::shared_ptr<const FourierTransform::Plans>>& plan_cache() {
  static std::map<ShapeKey, std::shared_ptr<const FourierTransform::Plans>> cache;
  return cache;
}

template <class T>
T* fftw_alloc_array(std::size_t n) {
  void* p = fftw_malloc(sizeof(T) * n);
  if (!p) throw std::bad_alloc();
  return static_cast<T*>(p);
}

}  // namespace

FourierTransform::FourierTransform(const PeriodicGrid& grid) : grid_(grid) {
  const int n1 = grid.size(0);
  const int n2 = grid.dim() == 2 ? grid.size(1) : 1;
  spectrum_size_ = grid.dim() == 1 ? static_cast<std::size_t>(n1 / 2 + 1)
                                   : static_cast<std::size_t>(n1) * (n2 / 2 + 1);
  real_buf_ = fftw_alloc_array<double>(grid.num_cells());
  spec_buf_ = reinterpret_cast<std::complex<double>*>(
      fftw_alloc_array<fftw_complex>(spectrum_size_));

  const ShapeKey key{grid.dim(), n1, n2};
  std::lock_guard lock(planner_mutex());
  auto& cache = plan_cache();
  if (auto it = cache.find(key); it != cache.end()) {
    plans_ = it->second;
    return;
  }
  auto plans = std::make_shared<Plans>();
  auto* spec = reinterpret_cast<fftw_complex*>(spec_buf_);
  if (grid.dim() == 1) {
    plans->forward = fftw_plan_dft_r2c_1d(n1, real_buf_, spec, FFTW_ESTIMATE);
    plans->backward = fftw_plan_dft_c2r_1d(n1, spec, real_buf_, FFTW_ESTIMATE);
  } else {
    plans->forward = fftw_plan_dft_r2c_2d(n1, n2, real_buf_, spec, FFTW_ESTIMATE);
    plans->backward = fftw_plan_dft_c2r_2d(n1, n2, spec, real_buf_, FFTW_ESTIMATE);
  }
  if (!plans->forward || !plans->backward) throw std::runtime_error("FFTW planning failed");
  cache.emplace(key, plans);
  plans_ = std::move(plans);
}

FourierTransform::~FourierTransform() {
  if (real_buf_) fftw_free(real_buf_);
  if (spec_buf_) fftw_free(spec_buf_);
}

FourierTransform::FourierTransform(FourierTransform&& other) noexcept
    : grid_(other.grid_),
      spectrum_size_(other.spectrum_size_),
      plans_(std::move(other.plans_)),
      real_buf_(std::exchange(other.real_buf_, nullptr)),
      spec_buf_(std::exchange(other.spec_buf_, nullptr)) {}

FourierTransform& FourierTransform::operator=(FourierTransform&& other) noexcept {
  if (this != &other) {
    if (real_buf_) fftw_free(real_buf_);
    if (spec_buf_) fftw_free(spec_buf_);
    grid_ = other.grid_;
    spectrum_size_ = other.spectrum_size_;
    plans_ = std::move(other.plans_);
    real_buf_ = std::exchange(other.real_buf_, nullptr);
    spec_buf_ = std::exchange(other.spec_buf_, nullptr);
  }
  return *this;
}

std::array<int, 2> FourierTransform::mode(std::size_t index) const {
  const int n1 = grid_.size(0);
  if (grid_.dim() == 1) return {static_cast<int>(index), 0};
  const int half2 = grid_.size(1) / 2 + 1;
  const int i = static_cast<int>(index) / half2;
  const int j = static_cast<int>(index) % half2;
  return {i <= n1 / 2 ? i : i - n1, j};
}

void FourierTransform::forward(std::span<const double> in,
                               std::span<std::complex<double>> out) {
  std::copy(in.begin(), in.end(), real_buf_);
  fftw_execute_dft_r2c(plans_->forward, real_buf_, reinterpret_cast<fftw_complex*>(spec_buf_));
  std::copy(spec_buf_, spec_buf_ + spectrum_size_, out.begin());
}

void FourierTransform::inverse(std::span<const std::complex<double>> in,
                               std::span<double> out) {
  std::copy(in.begin(), in.end(), spec_buf_);
  fftw_execute_dft_c2r(plans_->backward, reinterpret_cast<fftw_complex*>(spec_buf_), real_buf_);
  const double scale = 1.0 / static_cast<double>(grid_.num_cells());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = real_buf_[i] * scale;
}

void FourierTransform::apply_multiplier(std::span<const double> symbol,
                                        std::span<const double> in, std::span<double> out) {
  std::copy(in.begin(), in.end(), real_buf_);
  auto* spec = reinterpret_cast<fftw_complex*>(spec_buf_);
  fftw_execute_dft_r2c(plans_->forward, real_buf_, spec);
  for (std::size_t k = 0; k < spectrum_size_; ++k) spec_buf_[k] *= symbol[k];
  fftw_execute_dft_c2r(plans_->backward, spec, real_buf_);
  const double scale = 1.0 / static_cast<double>(grid_.num_cells());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = real_buf_[i] * scale;
}

}  // namespace pacok
