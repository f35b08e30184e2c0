#pragma once

// Sensorimotor-cortex drive to the thalamus: monophasic pulses at
// gamma-distributed intervals.

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "dbs/error.hpp"
#include "dbs/neuro/params.hpp"

namespace dbs::neuro {

struct SmcInput {
  std::vector<double> pulse_onsets_ms;
  double amplitude = 3.5;
  double width_ms = 5.0;
  double dt_ms = 0.01;
  std::vector<double> series;  ///< amplitude inside [onset, onset + width), else 0
};

/// Intervals are gamma distributed with shape 1/cv^2 and mean 1000/rate ms.
/// The first onset is one interval after t = 0.
template <typename Rng>
SmcInput generate_smc_input(double duration_ms, double dt_ms, Rng& rng, const SmcParams& p = {}) {
  if (!(duration_ms > 0.0)) throw Error(ErrorKind::InvalidArgument, "duration must be positive");
  if (!(dt_ms > 0.0)) throw Error(ErrorKind::InvalidArgument, "dt must be positive");
  SmcInput in;
  in.amplitude = p.amplitude;
  in.width_ms = p.width_ms;
  in.dt_ms = dt_ms;

  const double shape = 1.0 / (p.cv * p.cv);
  const double mean_ms = 1000.0 / p.rate_hz;
  std::gamma_distribution<double> interval(shape, mean_ms / shape);
  for (double t = interval(rng); t < duration_ms; t += interval(rng)) in.pulse_onsets_ms.push_back(t);

  const auto n = static_cast<std::size_t>(std::llround(duration_ms / dt_ms));
  in.series.assign(n, 0.0);
  for (double onset : in.pulse_onsets_ms) {
    const auto first = static_cast<std::size_t>(std::ceil(onset / dt_ms - 1e-9));
    for (std::size_t i = first; i < n && static_cast<double>(i) * dt_ms < onset + p.width_ms; ++i) {
      in.series[i] = p.amplitude;
    }
  }
  return in;
}

inline SmcInput generate_smc_input(double duration_ms, double dt_ms, std::uint64_t seed,
                                   const SmcParams& p = {}) {
  std::mt19937_64 rng(seed);
  return generate_smc_input(duration_ms, dt_ms, rng, p);
}

}  // namespace dbs::neuro
