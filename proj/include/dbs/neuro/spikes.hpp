#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "dbs/error.hpp"

namespace dbs::neuro {

inline constexpr double kSpikeThresholdMv = -35.0;
inline constexpr double kRefractoryMs = 2.0;

/// Online upward-crossing detector; feed one sample per step.
class SpikeDetector {
 public:
  explicit SpikeDetector(double threshold_mv = kSpikeThresholdMv, double refractory_ms = kRefractoryMs)
      : threshold_(threshold_mv), refractory_(refractory_ms) {}

  /// Returns true when a spike is registered at time t_ms.
  bool feed(double v, double t_ms) {
    const bool crossed = has_prev_ && prev_ < threshold_ && v >= threshold_;
    prev_ = v;
    has_prev_ = true;
    if (!crossed || t_ms - last_ < refractory_) return false;
    last_ = t_ms;
    return true;
  }

 private:
  double threshold_;
  double refractory_;
  double prev_ = 0.0;
  bool has_prev_ = false;
  double last_ = -std::numeric_limits<double>::infinity();
};

/// Times (ms, relative to sample 0) of upward crossings of -35 mV separated
/// by at least 2 ms.
inline std::vector<double> detect_spikes(std::span<const double> trace, double dt_ms) {
  if (trace.empty()) throw Error(ErrorKind::InvalidArgument, "empty trace");
  SpikeDetector det;
  std::vector<double> out;
  for (std::size_t i = 0; i < trace.size(); ++i) {
    const double t = static_cast<double>(i) * dt_ms;
    if (det.feed(trace[i], t)) out.push_back(t);
  }
  return out;
}

}  // namespace dbs::neuro
