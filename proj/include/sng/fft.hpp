#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include <fftw3.h>

namespace sng {

/// In-place complex DFT on a d-dimensional cube, unnormalized in both directions.
/// Plans are built with FFTW_ESTIMATE so results do not depend on planner timing.
class ComplexFft {
 public:
  ComplexFft(int dimension, int points_per_axis);
  ~ComplexFft();
  ComplexFft(const ComplexFft&) = delete;
  ComplexFft& operator=(const ComplexFft&) = delete;
  ComplexFft(ComplexFft&& other) noexcept;
  ComplexFft& operator=(ComplexFft&& other) noexcept;

  void forward(std::span<std::complex<double>> data) const;
  void backward(std::span<std::complex<double>> data) const;
  std::size_t size() const noexcept { return size_; }

 private:
  void release() noexcept;

  std::size_t size_ = 0;
  fftw_plan forward_ = nullptr;
  fftw_plan backward_ = nullptr;
};

/// Real-to-half-complex transform pair on a d-dimensional cube.
class RealFft {
 public:
  RealFft(int dimension, int points_per_axis);
  ~RealFft();
  RealFft(const RealFft&) = delete;
  RealFft& operator=(const RealFft&) = delete;

  std::size_t real_size() const noexcept { return real_size_; }
  std::size_t spectral_size() const noexcept { return spectral_size_; }

  void forward(std::span<double> in, std::span<std::complex<double>> out) const;
  /// Destroys the contents of `in` (FFTW c2r semantics).
  void backward(std::span<std::complex<double>> in, std::span<double> out) const;

 private:
  std::size_t real_size_ = 0;
  std::size_t spectral_size_ = 0;
  fftw_plan forward_ = nullptr;
  fftw_plan backward_ = nullptr;
};

}  // namespace sng
