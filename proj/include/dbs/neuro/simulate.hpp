#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <vector>

#include "dbs/error.hpp"
#include "dbs/neuro/network.hpp"
#include "dbs/neuro/smc.hpp"
#include "dbs/neuro/spikes.hpp"
#include "dbs/stim.hpp"

namespace dbs::neuro {

/// Everything recorded during one round. All series share dt and length.
struct RoundObservation {
  double dt_ms = kDefaultDtMs;
  std::vector<std::vector<double>> gpi_traces;  ///< [neuron][sample], mV
  std::vector<std::vector<double>> th_traces;   ///< [neuron][sample], mV
  std::vector<double> i_dbs;                    ///< applied electrode current, uA/cm^2
  SmcInput smc;
  std::array<std::vector<std::vector<double>>, kRegionCount> spikes;  ///< [region][neuron] times, ms

  std::size_t samples() const noexcept { return i_dbs.size(); }
  const std::vector<std::vector<double>>& region_spikes(Region r) const {
    return spikes[static_cast<std::size_t>(r)];
  }
};

struct RunOptions {
  bool record_traces = true;
};

/// Integrates `duration_ms` of network time driven by `train` and a fresh
/// sensorimotor input drawn from the state's random stream.
inline RoundObservation run_round(NetworkState& st, const PulseTrain& train, double duration_ms,
                                  RunOptions opts = {}) {
  const double dt = train.dt_ms;
  const auto steps = static_cast<std::size_t>(std::llround(duration_ms / dt));
  if (steps == 0) throw Error(ErrorKind::InvalidArgument, "round shorter than one step");
  if (train.samples.size() < steps) {
    throw Error(ErrorKind::InvalidArgument, "pulse train shorter than round");
  }
  const std::size_t n = st.neurons_per_region();

  RoundObservation obs;
  obs.dt_ms = dt;
  obs.smc = generate_smc_input(duration_ms, dt, st.rng, st.params->smc);
  obs.i_dbs.assign(train.samples.begin(), train.samples.begin() + static_cast<std::ptrdiff_t>(steps));
  if (opts.record_traces) {
    obs.gpi_traces.assign(n, std::vector<double>(steps));
    obs.th_traces.assign(n, std::vector<double>(steps));
  }
  std::array<std::vector<SpikeDetector>, kRegionCount> detectors;
  for (std::size_t r = 0; r < kRegionCount; ++r) {
    detectors[r].assign(n, SpikeDetector{});
    obs.spikes[r].assign(n, {});
  }

  for (std::size_t k = 0; k < steps; ++k) {
    step(st, obs.i_dbs[k], obs.smc.series[k], dt);
    const double t = static_cast<double>(k) * dt;
    for (std::size_t r = 0; r < kRegionCount; ++r) {
      for (std::size_t i = 0; i < n; ++i) {
        if (detectors[r][i].feed(st.regions[r][i].v, t)) obs.spikes[r][i].push_back(t);
      }
    }
    if (opts.record_traces) {
      for (std::size_t i = 0; i < n; ++i) {
        obs.gpi_traces[i][k] = st.region(Region::GPi)[i].v;
        obs.th_traces[i][k] = st.region(Region::TH)[i].v;
      }
    }
  }
  return obs;
}

/// Runs unstimulated for `duration_ms` to wash out initial transients.
inline void warm_in(NetworkState& st, double duration_ms, double dt_ms = kDefaultDtMs) {
  const auto steps = static_cast<std::size_t>(std::llround(duration_ms / dt_ms));
  std::vector<double> smc = generate_smc_input(duration_ms, dt_ms, st.rng, st.params->smc).series;
  for (std::size_t k = 0; k < steps; ++k) step(st, 0.0, smc[k], dt_ms);
}

}  // namespace dbs::neuro
