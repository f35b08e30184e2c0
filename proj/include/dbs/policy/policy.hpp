#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <string>

#include "dbs/policy/bandit_state.hpp"
#include "dbs/policy/select.hpp"

namespace dbs::policy {

struct Feedback {
  double reward = 0.0;
  double p_beta = 0.0;
};

/// select() and update() alternate; one caller per instance.
class Policy {
 public:
  explicit Policy(std::size_t arms) : state_(arms) {}
  virtual ~Policy() = default;

  virtual std::string name() const = 0;
  virtual ArmId select() = 0;
  virtual void update(ArmId arm, const Feedback& fb) { state_.record(arm, fb.reward); }

  /// Removes an arm from the active set for the rest of the run.
  virtual void prune(ArmId arm) { state_.deactivate(arm); }

  /// Current exploration rate, NaN for policies without one.
  virtual double epsilon() const { return std::numeric_limits<double>::quiet_NaN(); }
  virtual std::string phase() const { return "run"; }

  const BanditState& state() const noexcept { return state_; }
  ArmId greedy() const { return greedy_arm(state_); }

 protected:
  BanditState state_;
};

class UniformRandomPolicy final : public Policy {
 public:
  UniformRandomPolicy(std::size_t arms, std::uint64_t seed) : Policy(arms), rng_(seed) {}
  std::string name() const override { return "random"; }
  ArmId select() override { return uniform_select(state_, rng_); }

 private:
  std::mt19937_64 rng_;
};

class EpsGreedyPolicy final : public Policy {
 public:
  EpsGreedyPolicy(std::size_t arms, double eps, std::uint64_t seed) : Policy(arms), eps_(eps), rng_(seed) {
    if (!(eps >= 0.0 && eps <= 1.0)) throw Error(ErrorKind::InvalidArgument, "epsilon outside [0, 1]");
  }
  std::string name() const override { return "eps-greedy"; }
  ArmId select() override { return eps_greedy_select(state_, eps_, rng_); }
  double epsilon() const override { return eps_; }

 private:
  double eps_;
  std::mt19937_64 rng_;
};

class UcbPolicy final : public Policy {
 public:
  UcbPolicy(std::size_t arms, double c) : Policy(arms), c_(c) {}
  std::string name() const override { return "ucb"; }
  ArmId select() override { return ucb_select(state_, c_); }

 private:
  double c_;
};

class ThompsonPolicy final : public Policy {
 public:
  ThompsonPolicy(std::size_t arms, GaussianPrior prior, std::uint64_t seed)
      : Policy(arms), prior_(prior), rng_(seed) {
    if (!(prior.sigma0_sq >= 0.0)) throw Error(ErrorKind::InvalidArgument, "negative prior variance");
  }
  std::string name() const override { return "thompson"; }
  ArmId select() override { return thompson_select(state_, gaussian_posterior(state_, prior_), rng_); }

 private:
  GaussianPrior prior_;
  std::mt19937_64 rng_;
};

class BayesUcbPolicy final : public Policy {
 public:
  BayesUcbPolicy(std::size_t arms, double c, GaussianPrior prior) : Policy(arms), c_(c), prior_(prior) {}
  std::string name() const override { return "bayes-ucb"; }
  ArmId select() override { return bayes_ucb_select(state_, gaussian_posterior(state_, prior_), c_); }

 private:
  double c_;
  GaussianPrior prior_;
};

class DiscountedUcbPolicy final : public Policy {
 public:
  DiscountedUcbPolicy(std::size_t arms, double c, double discount)
      : Policy(arms), c_(c), stats_(arms, discount) {}
  std::string name() const override { return "discounted-ucb"; }
  ArmId select() override { return discounted_ucb_select(state_, stats_, c_); }
  void update(ArmId arm, const Feedback& fb) override {
    Policy::update(arm, fb);
    stats_.update(arm, fb.reward);
  }
  const DiscountedStats& stats() const noexcept { return stats_; }

 private:
  double c_;
  DiscountedStats stats_;
};

}  // namespace dbs::policy
