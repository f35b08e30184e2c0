#pragma once

#include <optional>

#include "dbs/env/reward.hpp"
#include "dbs/neuro/simulate.hpp"
#include "dbs/signal/beta.hpp"
#include "dbs/stim.hpp"

namespace dbs::env {

struct RoundResult {
  ArmId arm = 0;
  RewardBreakdown reward;
  signal::BetaPower p_beta;
  std::optional<neuro::RoundObservation> observation;
};

/// Closed-loop contract: each call plays one round of `arm` and carries any
/// internal state into the next call. Not safe for concurrent callers.
class Environment {
 public:
  virtual ~Environment() = default;
  virtual RoundResult play(ArmId arm) = 0;
  virtual const ArmSpace& arms() const = 0;
};

}  // namespace dbs::env
