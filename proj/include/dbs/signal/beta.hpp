#pragma once

// Beta-band (13-35 Hz) power of a membrane-potential signal.

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "dbs/error.hpp"
#include "dbs/signal/psd.hpp"

namespace dbs::signal {

inline constexpr double kBetaLowHz = 13.0;
inline constexpr double kBetaHighHz = 35.0;
/// Default chunk length: 2^14 samples, about 164 ms at 100 kHz.
inline constexpr std::size_t kDefaultSegmentLen = std::size_t{1} << 14;

/// Bulk transforms the whole record (zero-padded to a power of two); Chunked
/// averages non-overlapping segments of `segment_len` samples.
struct BetaMethod {
  enum class Kind { Bulk, Chunked };
  Kind kind = Kind::Bulk;
  std::size_t segment_len = kDefaultSegmentLen;

  static BetaMethod bulk() { return {Kind::Bulk, 0}; }
  static BetaMethod chunked(std::size_t len = kDefaultSegmentLen) { return {Kind::Chunked, len}; }

  friend bool operator==(const BetaMethod&, const BetaMethod&) = default;
};

inline std::string to_string(const BetaMethod& m) {
  if (m.kind == BetaMethod::Kind::Bulk) return "bulk";
  return "chunked:" + std::to_string(m.segment_len);
}

struct BetaPower {
  double value = 0.0;
  double band_lo_hz = kBetaLowHz;
  double band_hi_hz = kBetaHighHz;
  BetaMethod method;
};

/// PSD estimate used by beta_power, exposed for band-fraction checks. The
/// record (or each segment) is mean-subtracted by default so that leakage from
/// the resting potential does not reach the beta band.
inline Psd estimate_psd(std::span<const double> samples, double fs, BetaMethod method,
                        Window window = Window::None, Detrend detrend = Detrend::Constant) {
  if (samples.empty()) throw Error(ErrorKind::InvalidArgument, "empty series");
  if (method.kind == BetaMethod::Kind::Bulk) {
    return padded_periodogram(samples, fs, next_power_of_two(samples.size()), window, detrend);
  }
  if (!is_power_of_two(method.segment_len)) {
    throw Error(ErrorKind::NotPowerOfTwo, "segment length " + std::to_string(method.segment_len));
  }
  if (method.segment_len > samples.size()) {
    throw Error(ErrorKind::SegmentTooLong, "segment length " + std::to_string(method.segment_len) +
                                               " exceeds " + std::to_string(samples.size()) +
                                               " samples");
  }
  SegmentAverager avg(method.segment_len, fs, window, detrend);
  avg.push(samples);
  return avg.average();
}

inline BetaPower beta_power(std::span<const double> samples, double fs,
                            BetaMethod method = BetaMethod::bulk(), Window window = Window::None) {
  BetaPower out;
  out.method = method;
  out.value = band_power(estimate_psd(samples, fs, method, window), kBetaLowHz, kBetaHighHz);
  return out;
}

using Traces = std::vector<std::vector<double>>;

/// Local field potential proxy: pointwise mean across neurons.
inline std::vector<double> lfp_from_traces(const Traces& traces) {
  if (traces.empty()) throw Error(ErrorKind::InvalidArgument, "no traces");
  const std::size_t len = traces.front().size();
  std::vector<double> out(len, 0.0);
  for (const auto& tr : traces) {
    if (tr.size() != len) {
      throw Error(ErrorKind::LengthMismatch,
                  "trace lengths " + std::to_string(len) + " and " + std::to_string(tr.size()));
    }
    for (std::size_t i = 0; i < len; ++i) out[i] += tr[i];
  }
  const double inv = 1.0 / static_cast<double>(traces.size());
  for (double& v : out) v *= inv;
  return out;
}

enum class RegionPath {
  LfpFirst,       ///< beta power of the population mean signal
  PerNeuronMean,  ///< mean of per-neuron beta powers
};

inline BetaPower region_beta_power(const Traces& traces, double fs, RegionPath path,
                                   BetaMethod method = BetaMethod::bulk()) {
  if (path == RegionPath::LfpFirst) return beta_power(lfp_from_traces(traces), fs, method);
  if (traces.empty()) throw Error(ErrorKind::InvalidArgument, "no traces");
  BetaPower out;
  out.method = method;
  const std::size_t len = traces.front().size();
  for (const auto& tr : traces) {
    if (tr.size() != len) throw Error(ErrorKind::LengthMismatch, "unequal trace lengths");
    out.value += beta_power(tr, fs, method).value;
  }
  out.value /= static_cast<double>(traces.size());
  return out;
}

}  // namespace dbs::signal
