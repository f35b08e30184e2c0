#pragma once

// One-sided periodogram and segment-averaged (Welch, no overlap) PSD.

#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "dbs/error.hpp"
#include "dbs/signal/fft.hpp"

namespace dbs::signal {

enum class Window { None, Hann };

/// Constant detrending subtracts the record (or segment) mean before the transform.
enum class Detrend { None, Constant };

/// One-sided power spectral density: values[k] is the density at k * df Hz,
/// k = 0 .. n/2. Units are (signal units)^2 / Hz.
struct Psd {
  std::vector<double> values;
  double df = 1.0;

  double frequency(std::size_t k) const noexcept { return static_cast<double>(k) * df; }
};

namespace detail {

inline double window_value(Window w, std::size_t i, std::size_t len) {
  if (w == Window::None) return 1.0;
  return 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(len)));
}

/// Adds scale * |X_k|^2 (doubled for interior bins) to acc[0 .. n/2].
inline void accumulate_one_sided(std::span<const Complex> spectrum, double scale,
                                 std::span<double> acc) {
  const std::size_t n = spectrum.size();
  const std::size_t half = n / 2;
  for (std::size_t k = 0; k <= half && k < n; ++k) {
    double p = std::norm(spectrum[k]) * scale;
    if (k != 0 && k != half) p *= 2.0;
    acc[k] += p;
  }
}

}  // namespace detail

/// Integrates psd * df over bins whose centre frequency lies in [lo, hi].
inline double band_power(const Psd& psd, double lo_hz, double hi_hz) {
  const double eps = 1e-9 * psd.df;
  double acc = 0.0;
  for (std::size_t k = 0; k < psd.values.size(); ++k) {
    const double f = psd.frequency(k);
    if (f >= lo_hz - eps && f <= hi_hz + eps) acc += psd.values[k];
  }
  return acc * psd.df;
}

/// Total power in all bins except DC.
inline double non_dc_power(const Psd& psd) {
  double acc = 0.0;
  for (std::size_t k = 1; k < psd.values.size(); ++k) acc += psd.values[k];
  return acc * psd.df;
}

/// Periodogram of a series, zero-padded to `transform_len` (a power of two at
/// least as long as the input). Normalised by the unpadded window energy so
/// that sum(psd) * df equals the mean square of the (windowed) input.
inline Psd padded_periodogram(std::span<const double> samples, double fs, std::size_t transform_len,
                              Window window = Window::None, Detrend detrend = Detrend::None) {
  if (!is_power_of_two(transform_len)) {
    throw Error(ErrorKind::NotPowerOfTwo, "transform length " + std::to_string(transform_len));
  }
  if (samples.empty()) throw Error(ErrorKind::InvalidArgument, "empty series");
  if (transform_len < samples.size()) {
    throw Error(ErrorKind::InvalidArgument, "transform shorter than input");
  }
  double mean = 0.0;
  if (detrend == Detrend::Constant) {
    for (double x : samples) mean += x;
    mean /= static_cast<double>(samples.size());
  }
  std::vector<Complex> buf(transform_len, Complex(0.0, 0.0));
  double energy = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double w = detail::window_value(window, i, samples.size());
    buf[i] = Complex((samples[i] - mean) * w, 0.0);
    energy += w * w;
  }
  Radix2Plan(transform_len).forward(buf);

  Psd out;
  out.df = fs / static_cast<double>(transform_len);
  out.values.assign(transform_len / 2 + 1, 0.0);
  detail::accumulate_one_sided(buf, 1.0 / (fs * energy), out.values);
  return out;
}

/// One-sided periodogram |X_k|^2 / (fs * n) of a power-of-two-length series.
inline Psd psd(std::span<const double> samples, double fs, Window window = Window::None) {
  if (!is_power_of_two(samples.size())) {
    throw Error(ErrorKind::NotPowerOfTwo, "input length " + std::to_string(samples.size()));
  }
  return padded_periodogram(samples, fs, samples.size(), window);
}

/// Streaming segment averager: consumes samples in any block size and keeps
/// only one segment buffer, the transform twiddles, and a one-sided
/// accumulator. Partial trailing segments are discarded.
class SegmentAverager {
 public:
  SegmentAverager(std::size_t segment_len, double fs, Window window = Window::None,
                  Detrend detrend = Detrend::None)
      : plan_(segment_len), fs_(fs), window_(window), detrend_(detrend) {
    buffer_.resize(segment_len);
    acc_.assign(segment_len / 2 + 1, 0.0);
    for (std::size_t i = 0; i < segment_len; ++i) {
      const double w = detail::window_value(window_, i, segment_len);
      energy_ += w * w;
    }
  }

  void push(std::span<const double> samples) {
    const std::size_t len = plan_.size();
    for (double x : samples) {
      buffer_[fill_] = Complex(x, 0.0);
      if (++fill_ == len) flush();
    }
  }

  std::size_t segment_length() const noexcept { return plan_.size(); }
  std::size_t segments() const noexcept { return segments_; }

  /// Complex values held by the working buffer plus the twiddle table.
  std::size_t working_complex_capacity() const noexcept {
    return buffer_.capacity() + plan_.twiddle_count();
  }
  std::size_t accumulator_capacity() const noexcept { return acc_.capacity(); }

  Psd average() const {
    if (segments_ == 0) throw Error(ErrorKind::InsufficientData, "no complete segment");
    Psd out;
    out.df = fs_ / static_cast<double>(plan_.size());
    out.values = acc_;
    for (double& v : out.values) v /= static_cast<double>(segments_);
    return out;
  }

 private:
  void flush() {
    const std::size_t len = plan_.size();
    double mean = 0.0;
    if (detrend_ == Detrend::Constant) {
      for (const auto& x : buffer_) mean += x.real();
      mean /= static_cast<double>(len);
    }
    for (std::size_t i = 0; i < len; ++i) {
      buffer_[i] = Complex((buffer_[i].real() - mean) * detail::window_value(window_, i, len), 0.0);
    }
    plan_.forward(buffer_);
    detail::accumulate_one_sided(buffer_, 1.0 / (fs_ * energy_), acc_);
    ++segments_;
    fill_ = 0;
  }

  Radix2Plan plan_;
  double fs_;
  Window window_;
  Detrend detrend_;
  double energy_ = 0.0;
  std::vector<Complex> buffer_;
  std::vector<double> acc_;
  std::size_t fill_ = 0;
  std::size_t segments_ = 0;
};

}  // namespace dbs::signal
