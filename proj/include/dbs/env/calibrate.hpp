#pragma once

#include <cmath>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "dbs/env/environment.hpp"
#include "dbs/env/surrogate.hpp"
#include "dbs/error.hpp"

namespace dbs::env {

inline constexpr std::size_t kMinCalibrationRounds = 3;

namespace detail {

/// Two-pass sample mean and Bessel-corrected standard deviation.
inline std::pair<double, double> mean_std(const std::vector<double>& xs) {
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= static_cast<double>(xs.size());
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  return {mean, std::sqrt(ss / static_cast<double>(xs.size() - 1))};
}

}  // namespace detail

/// Summarizes rounds grouped by arm. Every arm of `arms` needs at least three
/// rounds.
inline SurrogateSpec calibrate_surrogate(const std::map<ArmId, std::vector<RoundResult>>& runs,
                                         const ArmSpace& arms,
                                         std::vector<std::pair<std::string, std::string>> provenance = {}) {
  SurrogateSpec spec;
  spec.provenance = std::move(provenance);
  for (ArmId id = 0; id < arms.size(); ++id) {
    const auto it = runs.find(id);
    const std::size_t count = it == runs.end() ? 0 : it->second.size();
    if (count < kMinCalibrationRounds) {
      throw Error(ErrorKind::InsufficientData, "arm " + std::to_string(id) + " has " +
                                                   std::to_string(count) + " rounds, need " +
                                                   std::to_string(kMinCalibrationRounds));
    }
    std::vector<double> rewards;
    std::vector<double> pbetas;
    for (const auto& r : it->second) {
      if (r.arm != id) throw Error(ErrorKind::InvalidArgument, "round filed under the wrong arm");
      rewards.push_back(r.reward.total);
      pbetas.push_back(r.p_beta.value);
    }
    ArmStats s;
    s.arm = id;
    s.params = arms.at(id);
    std::tie(s.reward_mean, s.reward_std) = detail::mean_std(rewards);
    std::tie(s.pbeta_mean, s.pbeta_std) = detail::mean_std(pbetas);
    spec.arms.push_back(s);
  }
  for (const auto& [id, rounds] : runs) {
    if (id >= arms.size()) throw Error(ErrorKind::UnknownArm, "arm id " + std::to_string(id));
  }
  return spec;
}

}  // namespace dbs::env
