#include "sng/fft.hpp"

#include <array>
#include <utility>

#include "sng/error.hpp"

namespace sng {

namespace {

constexpr unsigned kPlanFlags = FFTW_ESTIMATE | FFTW_UNALIGNED;

fftw_complex* as_fftw(std::complex<double>* p) { return reinterpret_cast<fftw_complex*>(p); }

std::array<int, 3> cube_dims(int n) { return {n, n, n}; }

}  // namespace

ComplexFft::ComplexFft(int dimension, int points_per_axis) {
  const auto dims = cube_dims(points_per_axis);
  size_ = 1;
  for (int d = 0; d < dimension; ++d) size_ *= static_cast<std::size_t>(points_per_axis);
  std::vector<std::complex<double>> scratch(size_);
  forward_ = fftw_plan_dft(dimension, dims.data(), as_fftw(scratch.data()),
                           as_fftw(scratch.data()), FFTW_FORWARD, kPlanFlags);
  backward_ = fftw_plan_dft(dimension, dims.data(), as_fftw(scratch.data()),
                            as_fftw(scratch.data()), FFTW_BACKWARD, kPlanFlags);
  if (!forward_ || !backward_) {
    release();
    throw Error("FFTW failed to build a complex plan");
  }
}

ComplexFft::~ComplexFft() { release(); }

ComplexFft::ComplexFft(ComplexFft&& other) noexcept
    : size_(other.size_),
      forward_(std::exchange(other.forward_, nullptr)),
      backward_(std::exchange(other.backward_, nullptr)) {}

ComplexFft& ComplexFft::operator=(ComplexFft&& other) noexcept {
  if (this != &other) {
    release();
    size_ = other.size_;
    forward_ = std::exchange(other.forward_, nullptr);
    backward_ = std::exchange(other.backward_, nullptr);
  }
  return *this;
}

void ComplexFft::release() noexcept {
  if (forward_) fftw_destroy_plan(forward_);
  if (backward_) fftw_destroy_plan(backward_);
  forward_ = backward_ = nullptr;
}

void ComplexFft::forward(std::span<std::complex<double>> data) const {
  fftw_execute_dft(forward_, as_fftw(data.data()), as_fftw(data.data()));
}

void ComplexFft::backward(std::span<std::complex<double>> data) const {
  fftw_execute_dft(backward_, as_fftw(data.data()), as_fftw(data.data()));
}

RealFft::RealFft(int dimension, int points_per_axis) {
  const auto dims = cube_dims(points_per_axis);
  real_size_ = 1;
  for (int d = 0; d < dimension; ++d) real_size_ *= static_cast<std::size_t>(points_per_axis);
  spectral_size_ = real_size_ / points_per_axis * (points_per_axis / 2 + 1);
  std::vector<double> r(real_size_);
  std::vector<std::complex<double>> c(spectral_size_);
  forward_ = fftw_plan_dft_r2c(dimension, dims.data(), r.data(), as_fftw(c.data()), kPlanFlags);
  backward_ = fftw_plan_dft_c2r(dimension, dims.data(), as_fftw(c.data()), r.data(), kPlanFlags);
  if (!forward_ || !backward_) {
    if (forward_) fftw_destroy_plan(forward_);
    if (backward_) fftw_destroy_plan(backward_);
    throw Error("FFTW failed to build a real plan");
  }
}

RealFft::~RealFft() {
  fftw_destroy_plan(forward_);
  fftw_destroy_plan(backward_);
}

void RealFft::forward(std::span<double> in, std::span<std::complex<double>> out) const {
  fftw_execute_dft_r2c(forward_, in.data(), as_fftw(out.data()));
}

void RealFft::backward(std::span<std::complex<double>> in, std::span<double> out) const {
  fftw_execute_dft_c2r(backward_, as_fftw(in.data()), out.data());
}

}  // namespace sng
