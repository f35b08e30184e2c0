#pragma once

// Thalamic relay fidelity: fraction of erroneous responses to cortical pulses.

#include <algorithm>
#include <cstddef>
#include <span>
#include <vector>

#include "dbs/error.hpp"

namespace dbs::signal {

inline constexpr double kResponseWindowMs = 25.0;

struct ErrorIndex {
  double value = 0.0;
  std::size_t missed = 0;
  std::size_t spurious = 0;
  std::size_t total_pulses = 0;  ///< pulses x neurons
};

/// Each cortical pulse opens a 25 ms window per neuron. A spike belongs to the
/// most recent window containing it. Empty windows count as missed; extra
/// spikes in a window and spikes outside every window count as spurious.
inline ErrorIndex error_index(const std::vector<std::vector<double>>& spikes_per_neuron,
                              std::span<const double> pulse_onsets_ms,
                              double window_ms = kResponseWindowMs) {
  if (pulse_onsets_ms.empty()) throw Error(ErrorKind::NoPulses, "no cortical pulses");
  std::vector<double> onsets(pulse_onsets_ms.begin(), pulse_onsets_ms.end());
  std::sort(onsets.begin(), onsets.end());

  ErrorIndex ei;
  ei.total_pulses = onsets.size() * spikes_per_neuron.size();
  std::vector<std::size_t> hits(onsets.size());
  for (const auto& spikes : spikes_per_neuron) {
    std::fill(hits.begin(), hits.end(), 0);
    for (double t : spikes) {
      // Last onset <= t.
      auto it = std::upper_bound(onsets.begin(), onsets.end(), t);
      if (it == onsets.begin()) {
        ++ei.spurious;
        continue;
      }
      const auto idx = static_cast<std::size_t>(std::distance(onsets.begin(), it) - 1);
      if (t < onsets[idx] + window_ms) {
        ++hits[idx];
      } else {
        ++ei.spurious;
      }
    }
    for (std::size_t h : hits) {
      if (h == 0) ++ei.missed;
      else ei.spurious += h - 1;
    }
  }
  if (ei.total_pulses > 0) {
    ei.value = static_cast<double>(ei.missed + ei.spurious) / static_cast<double>(ei.total_pulses);
  }
  return ei;
}

}  // namespace dbs::signal
