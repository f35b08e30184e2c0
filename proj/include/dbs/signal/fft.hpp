#pragma once

// Iterative in-place radix-2 Cooley-Tukey decimation-in-time FFT.

#include <bit>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "dbs/error.hpp"

namespace dbs::signal {

using Complex = std::complex<double>;

inline bool is_power_of_two(std::size_t n) noexcept { return n != 0 && std::has_single_bit(n); }

inline std::size_t next_power_of_two(std::size_t n) noexcept {
  return n <= 1 ? 1 : std::bit_ceil(n);
}

/// Precomputed twiddle factors for one transform length. A plan is immutable
/// after construction and may be shared across threads.
class Radix2Plan {
 public:
  explicit Radix2Plan(std::size_t n) : n_(n) {
    if (!is_power_of_two(n)) {
      throw Error(ErrorKind::NotPowerOfTwo, "transform length " + std::to_string(n));
    }
    twiddles_.resize(n / 2);
    for (std::size_t k = 0; k < n / 2; ++k) {
      const double angle = -2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
      twiddles_[k] = Complex(std::cos(angle), std::sin(angle));
    }
  }

  std::size_t size() const noexcept { return n_; }
  std::size_t twiddle_count() const noexcept { return twiddles_.size(); }

  /// Forward transform, X_k = sum_j x_j exp(-2 pi i jk/n), computed in place.
  void forward(std::span<Complex> data) const {
    if (data.size() != n_) {
      throw Error(ErrorKind::LengthMismatch, "plan length " + std::to_string(n_) +
                                                 " vs data length " + std::to_string(data.size()));
    }
    bit_reverse(data);
    for (std::size_t len = 2; len <= n_; len <<= 1) {
      const std::size_t half = len / 2;
      const std::size_t stride = n_ / len;
      for (std::size_t start = 0; start < n_; start += len) {
        for (std::size_t j = 0; j < half; ++j) {
          const Complex t = twiddles_[j * stride] * data[start + j + half];
          const Complex u = data[start + j];
          data[start + j] = u + t;
          data[start + j + half] = u - t;
        }
      }
    }
  }

 private:
  void bit_reverse(std::span<Complex> data) const {
    for (std::size_t i = 1, j = 0; i < n_; ++i) {
      std::size_t bit = n_ >> 1;
      for (; j & bit; bit >>= 1) j ^= bit;
      j ^= bit;
      if (i < j) std::swap(data[i], data[j]);
    }
  }

  std::size_t n_;
  std::vector<Complex> twiddles_;
};

/// Complex spectrum of a real series; bin k sits at k * fs / n Hz.
struct Spectrum {
  std::vector<Complex> bins;
  double fs = 1.0;

  std::size_t n() const noexcept { return bins.size(); }
  double bin_frequency(std::size_t k) const noexcept {
    return static_cast<double>(k) * fs / static_cast<double>(bins.size());
  }
};

inline Spectrum fft_radix2(std::span<const double> samples, double fs = 1.0) {
  if (!is_power_of_two(samples.size())) {
    throw Error(ErrorKind::NotPowerOfTwo, "input length " + std::to_string(samples.size()));
  }
  Spectrum s;
  s.fs = fs;
  s.bins.assign(samples.begin(), samples.end());
  Radix2Plan(samples.size()).forward(s.bins);
  return s;
}

}  // namespace dbs::signal
