#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>

#include "dbs/env/environment.hpp"
#include "dbs/env/reward.hpp"
#include "dbs/error.hpp"
#include "dbs/neuro/network.hpp"
#include "dbs/neuro/simulate.hpp"
#include "dbs/signal/beta.hpp"

namespace dbs::env {

struct BgtEnvConfig {
  neuro::Condition condition = neuro::Condition::PD;
  std::size_t neurons_per_region = 10;
  double round_ms = 1000.0;
  double dt_ms = kDefaultDtMs;
  double warm_in_ms = 2000.0;
  /// Unstimulated rounds whose mean beta power becomes the r1 reference.
  std::size_t baseline_rounds = 5;
  /// Overrides the measured r1 reference when set.
  std::optional<double> p_beta_norm_ref;
  RewardConfig reward;
  signal::RegionPath path = signal::RegionPath::LfpFirst;
  signal::BetaMethod method = signal::BetaMethod::bulk();
  bool keep_observations = false;
  std::shared_ptr<const neuro::ModelParams> params;
};

class BgtEnv final : public Environment {
 public:
  BgtEnv(BgtEnvConfig cfg, std::uint64_t seed) : cfg_(std::move(cfg)), arms_(build_arm_space()) {
    if (!(cfg_.round_ms > 0.0) || !(cfg_.dt_ms > 0.0)) {
      throw Error(ErrorKind::InvalidArgument, "round length and dt must be positive");
    }
    if (!cfg_.params) cfg_.params = std::make_shared<const neuro::ModelParams>(neuro::default_model_params());
    state_ = neuro::init_network(cfg_.condition, cfg_.neurons_per_region, seed, cfg_.params);
    if (cfg_.warm_in_ms > 0.0) neuro::warm_in(state_, cfg_.warm_in_ms, cfg_.dt_ms);

    reward_ = cfg_.reward;
    if (cfg_.p_beta_norm_ref) {
      reward_.p_beta_norm_ref = *cfg_.p_beta_norm_ref;
    } else {
      if (cfg_.baseline_rounds == 0) {
        throw Error(ErrorKind::InvalidArgument, "need baseline rounds or an explicit reference");
      }
      const PulseTrain off = generate_pulse_train(StimParams{}, cfg_.round_ms, cfg_.dt_ms);
      double sum = 0.0;
      for (std::size_t k = 0; k < cfg_.baseline_rounds; ++k) sum += measure(off).value;
      baseline_ = sum / static_cast<double>(cfg_.baseline_rounds);
      reward_.p_beta_norm_ref = baseline_;
    }
    if (!(reward_.p_beta_norm_ref > 0.0)) {
      throw Error(ErrorKind::InvalidArgument, "beta power reference is not positive");
    }
  }

  RoundResult play(ArmId arm) override {
    const PulseTrain train = generate_pulse_train(arms_.at(arm), cfg_.round_ms, cfg_.dt_ms);
    neuro::RoundObservation obs = neuro::run_round(state_, train, cfg_.round_ms);
    RoundResult out;
    out.arm = arm;
    out.p_beta = signal::region_beta_power(obs.gpi_traces, sampling_rate_hz(), cfg_.path, cfg_.method);
    out.reward = compute_reward(out.p_beta, obs.i_dbs, cfg_.dt_ms, reward_);
    if (cfg_.keep_observations) out.observation = std::move(obs);
    return out;
  }

  const ArmSpace& arms() const override { return arms_; }
  const RewardConfig& reward_config() const noexcept { return reward_; }
  /// Mean unstimulated beta power from start-up; 0 when the reference was given.
  double baseline_p_beta() const noexcept { return baseline_; }
  const neuro::NetworkState& state() const noexcept { return state_; }
  double sampling_rate_hz() const noexcept { return 1000.0 / cfg_.dt_ms; }

 private:
  signal::BetaPower measure(const PulseTrain& train) {
    const auto obs = neuro::run_round(state_, train, cfg_.round_ms);
    return signal::region_beta_power(obs.gpi_traces, sampling_rate_hz(), cfg_.path, cfg_.method);
  }

  BgtEnvConfig cfg_;
  ArmSpace arms_;
  neuro::NetworkState state_;
  RewardConfig reward_;
  double baseline_ = 0.0;
};

}  // namespace dbs::env
