#pragma once

#include <complex>
#include <cstddef>
#include <span>

namespace lav::detail {

/// Real-to-complex forward DFT of a fixed size, backed by FFTW. Each instance
/// owns its plan and aligned buffers; distinct instances can run concurrently.
class RealFft {
 public:
  explicit RealFft(std::size_t size);
  ~RealFft();
  RealFft(const RealFft&) = delete;
  RealFft& operator=(const RealFft&) = delete;

  std::size_t size() const noexcept { return size_; }
  std::span<double> input() noexcept { return {in_, size_}; }

  /// Transforms input() and returns bins 0..size/2.
  std::span<const std::complex<double>> forward();

 private:
  std::size_t size_;
  double* in_ = nullptr;
  std::complex<double>* out_ = nullptr;
  void* plan_ = nullptr;
};

}  // namespace lav::detail
