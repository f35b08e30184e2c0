#pragma once

#include <algorithm>
#include <cmath>
#include <span>

#include "dbs/error.hpp"
#include "dbs/signal/beta.hpp"
#include "dbs/signal/rms.hpp"
#include "dbs/stim.hpp"

namespace dbs::env {

/// RMS of the strongest grid arm: 5000 * sqrt(180 Hz * 0.3 ms).
inline const double kMaxGridRms = ideal_rms_current(StimParams{180.0, 5000.0});

struct RewardConfig {
  double alpha = -0.7;
  double beta = 0.1;
  double gamma = -0.2;
  double p_beta_norm_ref = 1.0;
  double i_rms_norm_ref = kMaxGridRms;

  friend bool operator==(const RewardConfig&, const RewardConfig&) = default;
};

/// Components are each in [0, 1]. An environment that models only the total
/// (the surrogate) leaves them NaN.
struct RewardBreakdown {
  double r1 = 0.0;  ///< normalized beta power
  double r2 = 0.0;  ///< fraction of the round with no stimulation current
  double r3 = 0.0;  ///< normalized RMS current
  double total = 0.0;
};

inline RewardBreakdown compute_reward(const signal::BetaPower& p_beta, std::span<const double> i_dbs,
                                      double dt_ms, const RewardConfig& cfg) {
  if (!(cfg.p_beta_norm_ref > 0.0) || !(cfg.i_rms_norm_ref > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "normalization references must be positive");
  }
  if (i_dbs.empty()) throw Error(ErrorKind::InvalidArgument, "empty stimulation series");
  RewardBreakdown out;
  out.r1 = std::clamp(p_beta.value / cfg.p_beta_norm_ref, 0.0, 1.0);
  const auto off = std::count(i_dbs.begin(), i_dbs.end(), 0.0);
  out.r2 = static_cast<double>(off) / static_cast<double>(i_dbs.size());
  out.r3 = std::clamp(signal::rms_of_series(i_dbs, dt_ms) / cfg.i_rms_norm_ref, 0.0, 1.0);
  out.total = cfg.alpha * out.r1 + cfg.beta * out.r2 + cfg.gamma * out.r3;
  return out;
}

}  // namespace dbs::env
