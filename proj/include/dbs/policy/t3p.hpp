#pragma once

// Warm-up, top-K pruning, then decaying epsilon-greedy, with restarts on a
// timer or on a sustained rise in beta power.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "dbs/error.hpp"
#include "dbs/policy/policy.hpp"

namespace dbs::policy {

struct T3PConfig {
  double eps_start = 0.2;
  double eps_min = 0.0;
  double decay_step = 0.025;
  std::size_t k = 25;
  /// Beta-power rise above the arm's running mean, as a fraction of the mean
  /// beta power seen during warm-up.
  double deviation_threshold = 0.2;
  std::size_t deviation_patience = 3;
  /// Rounds between scheduled restarts; 0 disables the timer.
  std::size_t timer_period = 600;
  /// Keep Q and n across restarts.
  bool keep_estimates = false;

  void validate(std::size_t arms) const {
    if (!(eps_min >= 0.0 && eps_min <= eps_start && eps_start <= 1.0)) {
      throw Error(ErrorKind::ConfigError, "need 0 <= eps_min <= eps_start <= 1");
    }
    if (!(decay_step >= 0.0)) throw Error(ErrorKind::ConfigError, "decay_step must be non-negative");
    if (k < 1 || k > arms) throw Error(ErrorKind::ConfigError, "K must lie in [1, arms]");
    if (!(deviation_threshold > 0.0)) throw Error(ErrorKind::ConfigError, "deviation_threshold must be positive");
    if (deviation_patience < 1) throw Error(ErrorKind::ConfigError, "deviation_patience must be at least 1");
  }

  friend bool operator==(const T3PConfig&, const T3PConfig&) = default;
};

enum class T3PPhase { Warmup, Run };

inline std::string to_string(T3PPhase p) { return p == T3PPhase::Warmup ? "warmup" : "run"; }

class T3PPolicy final : public Policy {
 public:
  T3PPolicy(std::size_t arms, T3PConfig cfg, std::uint64_t seed)
      : Policy(arms), cfg_(cfg), rng_(seed), banned_(arms, false), pbeta_mean_(arms, 0.0), pbeta_n_(arms, 0) {
    cfg_.validate(arms);
  }

  std::string name() const override { return "t3p"; }

  ArmId select() override {
    if (phase_ == T3PPhase::Warmup) return next_warmup_arm();
    return eps_greedy_select(state_, epsilon(), rng_);
  }

  void update(ArmId arm, const Feedback& fb) override {
    Policy::update(arm, fb);
    ++rounds_since_start_;
    if (phase_ == T3PPhase::Warmup) {
      warmup_pbeta_sum_ += fb.p_beta;
      ++warmup_rounds_;
      track_pbeta(arm, fb.p_beta);
      warm_next_ = arm + 1;
      if (!has_warmup_arm()) prune_to_top_k();
    } else {
      ++run_rounds_;
      const double scale = warmup_pbeta_sum_ / static_cast<double>(std::max<std::size_t>(warmup_rounds_, 1));
      const bool deviates = pbeta_n_[arm] > 0 && fb.p_beta - pbeta_mean_[arm] > cfg_.deviation_threshold * scale;
      deviation_streak_ = deviates ? deviation_streak_ + 1 : 0;
      track_pbeta(arm, fb.p_beta);
      if (deviation_streak_ >= cfg_.deviation_patience) {
        restart();
        return;
      }
    }
    if (cfg_.timer_period > 0 && rounds_since_start_ >= cfg_.timer_period) restart();
  }

  /// Bans the arm until the next restart.
  void prune(ArmId arm) override {
    if (arm >= banned_.size()) throw Error(ErrorKind::UnknownArm, "arm id " + std::to_string(arm));
    if (!state_.is_active(arm)) return;
    state_.deactivate(arm);
    banned_[arm] = true;
  }

  /// Fresh warm-up: clears bans and, unless configured otherwise, Q and n.
  void restart() {
    if (!cfg_.keep_estimates) state_.reset_estimates();
    state_.activate_all();
    std::fill(banned_.begin(), banned_.end(), false);
    std::fill(pbeta_mean_.begin(), pbeta_mean_.end(), 0.0);
    std::fill(pbeta_n_.begin(), pbeta_n_.end(), 0);
    phase_ = T3PPhase::Warmup;
    warm_next_ = 0;
    run_rounds_ = 0;
    rounds_since_start_ = 0;
    warmup_pbeta_sum_ = 0.0;
    warmup_rounds_ = 0;
    deviation_streak_ = 0;
    ++restarts_;
  }

  double epsilon() const override {
    if (phase_ == T3PPhase::Warmup) return cfg_.eps_start;
    return std::max(cfg_.eps_min, cfg_.eps_start - cfg_.decay_step * static_cast<double>(run_rounds_));
  }
  std::string phase() const override { return to_string(phase_); }
  T3PPhase phase_id() const noexcept { return phase_; }
  std::size_t restarts() const noexcept { return restarts_; }
  const T3PConfig& config() const noexcept { return cfg_; }

 private:
  bool has_warmup_arm() const {
    for (ArmId a = warm_next_; a < banned_.size(); ++a) {
      if (!banned_[a]) return true;
    }
    return false;
  }

  ArmId next_warmup_arm() const {
    for (ArmId a = warm_next_; a < banned_.size(); ++a) {
      if (!banned_[a]) return a;
    }
    throw Error(ErrorKind::InvalidArgument, "warm-up exhausted");
  }

  /// Keeps the K highest-Q unbanned arms; equal Q keeps the lower id.
  void prune_to_top_k() {
    std::vector<ArmId> order;
    for (ArmId a = 0; a < banned_.size(); ++a) {
      if (!banned_[a]) order.push_back(a);
    }
    std::stable_sort(order.begin(), order.end(),
                     [&](ArmId x, ArmId y) { return state_.q(x) > state_.q(y); });
    order.resize(std::min(order.size(), cfg_.k));
    state_.set_active(order);
    phase_ = T3PPhase::Run;
    run_rounds_ = 0;
  }

  void track_pbeta(ArmId arm, double p_beta) {
    ++pbeta_n_[arm];
    pbeta_mean_[arm] += (p_beta - pbeta_mean_[arm]) / static_cast<double>(pbeta_n_[arm]);
  }

  T3PConfig cfg_;
  std::mt19937_64 rng_;
  std::vector<bool> banned_;
  std::vector<double> pbeta_mean_;
  std::vector<std::size_t> pbeta_n_;
  T3PPhase phase_ = T3PPhase::Warmup;
  ArmId warm_next_ = 0;
  std::size_t run_rounds_ = 0;
  std::size_t rounds_since_start_ = 0;
  double warmup_pbeta_sum_ = 0.0;
  std::size_t warmup_rounds_ = 0;
  std::size_t deviation_streak_ = 0;
  std::size_t restarts_ = 0;
};

}  // namespace dbs::policy
