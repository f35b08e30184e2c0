#pragma once

// Stimulation parameter space and biphasic pulse-train synthesis.

#include <array>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "dbs/error.hpp"
#include "dbs/signal/rms.hpp"

namespace dbs {

/// Width of one stimulation phase (anodic or cathodic), in ms.
inline constexpr double kPhaseWidthMs = 0.15;
/// Default integration / sampling step, in ms (100 kHz).
inline constexpr double kDefaultDtMs = 0.01;

inline constexpr std::array<double, 6> kGridFrequenciesHz{55, 80, 105, 130, 155, 180};
inline constexpr std::array<double, 5> kGridAmplitudes{1000, 2000, 3000, 4000, 5000};

/// One candidate stimulation setting. Amplitude is a current density in uA/cm^2.
struct StimParams {
  double frequency_hz = 0.0;
  double amplitude = 0.0;

  bool is_off() const noexcept { return amplitude == 0.0; }

  friend bool operator==(const StimParams&, const StimParams&) = default;
};

/// Zero amplitude always collapses onto the single off setting (0 Hz, 0).
inline StimParams canonical(StimParams p) noexcept {
  if (p.amplitude == 0.0) return StimParams{0.0, 0.0};
  return p;
}

using ArmId = std::size_t;

/// The discrete action set: the off arm followed by frequency-major,
/// amplitude-minor grid settings.
class ArmSpace {
 public:
  explicit ArmSpace(std::vector<StimParams> arms) : arms_(std::move(arms)) {}

  std::size_t size() const noexcept { return arms_.size(); }
  const std::vector<StimParams>& arms() const noexcept { return arms_; }

  const StimParams& at(ArmId id) const {
    if (id >= arms_.size()) {
      throw Error(ErrorKind::UnknownArm, "arm id " + std::to_string(id) + " out of range");
    }
    return arms_[id];
  }

  /// Returns the id of the arm with exactly these parameters.
  ArmId find(StimParams p) const {
    p = canonical(p);
    for (ArmId i = 0; i < arms_.size(); ++i) {
      if (arms_[i] == p) return i;
    }
    throw Error(ErrorKind::UnknownArm, "no arm (" + std::to_string(p.frequency_hz) + " Hz, " +
                                           std::to_string(p.amplitude) + ")");
  }

  bool contains(StimParams p) const noexcept {
    p = canonical(p);
    for (const auto& a : arms_) {
      if (a == p) return true;
    }
    return false;
  }

  friend bool operator==(const ArmSpace&, const ArmSpace&) = default;

 private:
  std::vector<StimParams> arms_;
};

/// The canonical 31-arm grid.
inline ArmSpace build_arm_space() {
  std::vector<StimParams> arms;
  arms.reserve(1 + kGridFrequenciesHz.size() * kGridAmplitudes.size());
  arms.push_back(StimParams{0.0, 0.0});
  for (double f : kGridFrequenciesHz) {
    for (double a : kGridAmplitudes) arms.push_back(StimParams{f, a});
  }
  return ArmSpace(std::move(arms));
}

/// Sampled stimulation current density (uA/cm^2), one value per step of dt ms.
struct PulseTrain {
  std::vector<double> samples;
  double dt_ms = kDefaultDtMs;
  double duration_ms = 0.0;
};

namespace detail {

inline std::size_t samples_per_phase(double dt_ms) {
  if (!(dt_ms > 0.0)) throw Error(ErrorKind::InvalidArgument, "dt must be positive");
  const double ratio = kPhaseWidthMs / dt_ms;
  const double rounded = std::round(ratio);
  if (rounded < 1.0 || std::abs(ratio - rounded) > 1e-9 * std::max(1.0, ratio)) {
    throw Error(ErrorKind::NonDivisiblePhase,
                "0.15 ms phase is not a whole number of dt=" + std::to_string(dt_ms) + " ms steps");
  }
  return static_cast<std::size_t>(rounded);
}

}  // namespace detail

/// Rectangular, anodic-first, charge-balanced biphasic pulses with onsets at
/// k/frequency from t = 0. Only pulses that fit entirely inside the train are
/// emitted, so every train carries zero net charge.
inline PulseTrain generate_pulse_train(StimParams params, double duration_ms,
                                       double dt_ms = kDefaultDtMs) {
  if (!(duration_ms > 0.0)) throw Error(ErrorKind::InvalidArgument, "duration must be positive");
  const std::size_t phase = detail::samples_per_phase(dt_ms);
  params = canonical(params);

  PulseTrain train;
  train.dt_ms = dt_ms;
  train.duration_ms = duration_ms;
  train.samples.assign(static_cast<std::size_t>(std::llround(duration_ms / dt_ms)), 0.0);
  if (params.is_off()) return train;

  if (!(params.frequency_hz > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "frequency must be positive for a nonzero amplitude");
  }
  const double period_ms = 1000.0 / params.frequency_hz;
  if (period_ms < 2.0 * kPhaseWidthMs - 1e-12) {
    throw Error(ErrorKind::PeriodTooShort, "pulse period " + std::to_string(period_ms) +
                                               " ms is shorter than one biphasic pulse");
  }

  const std::size_t n = train.samples.size();
  for (std::size_t k = 0;; ++k) {
    const auto onset = static_cast<std::size_t>(std::llround(k * period_ms / dt_ms));
    if (onset + 2 * phase > n) break;
    for (std::size_t i = 0; i < phase; ++i) {
      train.samples[onset + i] = params.amplitude;
      train.samples[onset + phase + i] = -params.amplitude;
    }
  }
  return train;
}

inline double rms_current(const PulseTrain& train) {
  return signal::rms_of_series(train.samples, train.dt_ms);
}

/// RMS of an ideal biphasic train at a continuous pulse rate:
/// A * sqrt(f * 300 us). Accepts any frequency, grid or not.
inline double ideal_rms_current(StimParams params) {
  params = canonical(params);
  return params.amplitude * std::sqrt(params.frequency_hz * 2.0 * kPhaseWidthMs * 1e-3);
}

/// Net charge (uA ms / cm^2) delivered by the train.
inline double total_charge(const PulseTrain& train) {
  double q = 0.0;
  for (double x : train.samples) q += x;
  return q * train.dt_ms;
}

}  // namespace dbs
