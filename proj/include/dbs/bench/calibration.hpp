#pragma once

// Builds a surrogate spec (and per-arm reward means for regret) from the
// network model.

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "dbs/env/bgt.hpp"
#include "dbs/env/calibrate.hpp"

namespace dbs::bench {

struct CalibrationConfig {
  std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};
  std::size_t rounds_per_arm = 3;
  /// Rounds played after switching arms and discarded, to let transients pass.
  std::size_t settle_rounds = 1;
  env::BgtEnvConfig env;
};

/// Per seed, one environment is warmed in and baselined; every arm then runs
/// settle_rounds + rounds_per_arm rounds on its own copy of that environment,
/// so arms do not inherit each other's stimulation history.
inline std::map<ArmId, std::vector<env::RoundResult>> collect_calibration_rounds(
    const CalibrationConfig& cfg, const std::function<void(std::uint64_t, ArmId)>& progress = {}) {
  std::map<ArmId, std::vector<env::RoundResult>> runs;
  for (std::uint64_t seed : cfg.seeds) {
    const env::BgtEnv start(cfg.env, seed);
    for (ArmId arm = 0; arm < start.arms().size(); ++arm) {
      if (progress) progress(seed, arm);
      env::BgtEnv environment = start;
      for (std::size_t k = 0; k < cfg.settle_rounds; ++k) environment.play(arm);
      for (std::size_t k = 0; k < cfg.rounds_per_arm; ++k) runs[arm].push_back(environment.play(arm));
    }
  }
  return runs;
}

inline env::SurrogateSpec calibrate_from_model(
    const CalibrationConfig& cfg, const std::function<void(std::uint64_t, ArmId)>& progress = {}) {
  const auto runs = collect_calibration_rounds(cfg, progress);
  const auto params = cfg.env.params ? cfg.env.params
                                     : std::make_shared<const neuro::ModelParams>(neuro::default_model_params());
  std::string seeds;
  for (std::uint64_t s : cfg.seeds) seeds += (seeds.empty() ? "" : " ") + std::to_string(s);
  std::vector<std::pair<std::string, std::string>> prov{
      {"schema", "surrogate-spec/1"},
      {"source", "calibrated from the network model"},
      {"model_version", params->model_version},
      {"condition", neuro::to_string(cfg.env.condition)},
      {"neurons_per_region", std::to_string(cfg.env.neurons_per_region)},
      {"seeds", seeds},
      {"rounds_per_arm", std::to_string(cfg.rounds_per_arm)},
      {"settle_rounds", std::to_string(cfg.settle_rounds)},
      {"round_ms", csv::format_double(cfg.env.round_ms)},
      {"dt_ms", csv::format_double(cfg.env.dt_ms)},
      {"warm_in_ms", csv::format_double(cfg.env.warm_in_ms)},
      {"baseline_rounds", std::to_string(cfg.env.baseline_rounds)},
      {"beta_path", cfg.env.path == signal::RegionPath::LfpFirst ? "lfp-first" : "per-neuron-mean"},
      {"beta_method", signal::to_string(cfg.env.method)},
  };
  return env::calibrate_surrogate(runs, build_arm_space(), std::move(prov));
}

}  // namespace dbs::bench
