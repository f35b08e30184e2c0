#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "dbs/env/surrogate.hpp"
#include "dbs/policy/factory.hpp"
#include "dbs/policy/select.hpp"
#include "dbs/policy/t3p.hpp"

namespace dbs::policy {
namespace {

BanditState make_state(const std::vector<double>& q, const std::vector<std::size_t>& n) {
  BanditState s(q.size());
  for (ArmId a = 0; a < q.size(); ++a) {
    for (std::size_t k = 0; k < n[a]; ++k) s.record(a, q[a]);
  }
  return s;
}

TEST(State, IncrementalMean) {
  BanditState s(2);
  s.record(1, 1.0);
  s.record(1, 0.0);
  s.record(1, 0.5);
  EXPECT_DOUBLE_EQ(s.q(1), 0.5);
  EXPECT_EQ(s.n(1), 3u);
  EXPECT_EQ(s.t(), 3u);
  EXPECT_THROW(s.record(2, 0.0), Error);
}

TEST(Ucb, UnplayedFirst) {
  BanditState s(2);
  s.record(1, 0.9);
  s.record(1, 0.9);
  EXPECT_EQ(ucb_select(s, 0.05), 0u);
}

TEST(Ucb, EqualBonusesPickHigherQ) {
  EXPECT_EQ(ucb_select(make_state({0.5, 0.4}, {10, 10}), 0.05), 0u);
}

TEST(Ucb, BonusDominates) {
  const auto s = make_state({0.5, 0.4}, {100, 1});
  ASSERT_EQ(s.t(), 101u);
  EXPECT_NEAR(std::sqrt(std::log(101.0) / 1.0), 2.148, 1e-3);
  EXPECT_EQ(ucb_select(s, 1.0), 1u);
}

TEST(EpsGreedy, ZeroEpsIsGreedy) {
  std::mt19937_64 rng(1);
  const auto s = make_state({0.1, 0.7, 0.3}, {1, 1, 1});
  for (int i = 0; i < 100; ++i) EXPECT_EQ(eps_greedy_select(s, 0.0, rng), 1u);
  const auto tie = make_state({0.3, 0.3}, {1, 1});
  EXPECT_EQ(eps_greedy_select(tie, 0.0, rng), 0u);
}

TEST(EpsGreedy, FullExplorationIsUniform) {
  std::mt19937_64 rng(12);
  const auto s = make_state({0.0, 1.0}, {1, 1});
  int zero = 0;
  const int n = 10000;
  for (int i = 0; i < n; ++i) zero += eps_greedy_select(s, 1.0, rng) == 0u;
  EXPECT_NEAR(static_cast<double>(zero) / n, 0.5, 0.02);
}

TEST(EpsGreedy, RespectsActiveSet) {
  std::mt19937_64 rng(3);
  auto s = make_state({0.9, 0.1, 0.2, 0.3}, {1, 1, 1, 1});
  s.deactivate(0);
  s.deactivate(2);
  for (int i = 0; i < 500; ++i) {
    const ArmId a = eps_greedy_select(s, 1.0, rng);
    EXPECT_TRUE(a == 1 || a == 3);
  }
  EXPECT_THROW(eps_greedy_select(s, 1.5, rng), Error);
}

TEST(Thompson, ZeroVarianceIsArgmax) {
  std::mt19937_64 rng(4);
  const auto s = make_state({0.2, 0.6, 0.4}, {1, 1, 1});
  const auto post = gaussian_posterior(s, GaussianPrior{0.0, 0.0});
  for (int i = 0; i < 20; ++i) EXPECT_EQ(thompson_select(s, post, rng), 1u);
}

TEST(Thompson, PosteriorUpdate) {
  const auto s = make_state({1.0, 0.0}, {3, 0});
  const auto post = gaussian_posterior(s, GaussianPrior{0.0, 1.0});
  EXPECT_DOUBLE_EQ(post.mu[0], 1.0);
  EXPECT_DOUBLE_EQ(post.var[0], 0.25);
  EXPECT_DOUBLE_EQ(post.mu[1], 0.0);
  EXPECT_DOUBLE_EQ(post.var[1], 1.0);
}

TEST(Thompson, ReplayIsIdentical) {
  ThompsonPolicy a(5, GaussianPrior{}, 77);
  ThompsonPolicy b(5, GaussianPrior{}, 77);
  for (int i = 0; i < 50; ++i) {
    const ArmId x = a.select();
    EXPECT_EQ(x, b.select());
    a.update(x, {0.1 * static_cast<double>(x), 0.0});
    b.update(x, {0.1 * static_cast<double>(x), 0.0});
  }
}

TEST(BayesUcb, ZeroVarianceIsArgmax) {
  const auto s = make_state({0.2, 0.6, 0.4}, {1, 1, 1});
  Posterior post{{0.2, 0.6, 0.4}, {0.0, 0.0, 0.0}};
  EXPECT_EQ(bayes_ucb_select(s, post, 1.0), 1u);
}

TEST(BayesUcb, QuantileLiftsUncertainArm) {
  const auto s = make_state({0.5, 0.4}, {50, 50});
  ASSERT_EQ(s.t(), 100u);
  EXPECT_NEAR(bayes_ucb_quantile(100), 2.326, 1e-3);
  Posterior post{{0.5, 0.4}, {0.01 * 0.01, 0.5 * 0.5}};
  EXPECT_EQ(bayes_ucb_select(s, post, 1.0), 1u);
  EXPECT_NEAR(0.4 + bayes_ucb_quantile(100) * 0.5, 1.56, 0.01);
}

TEST(BayesUcb, UnplayedFirst) {
  const auto s = make_state({0.5, 0.0, 0.4}, {3, 0, 2});
  EXPECT_EQ(bayes_ucb_select(s, gaussian_posterior(s, {}), 1.0), 1u);
}

TEST(DiscountedUcb, DiscountedMean) {
  DiscountedStats d(2, 0.5);
  d.update(0, 1.0);
  d.update(0, 0.0);
  EXPECT_NEAR(d.mean(0), 1.0 / 3.0, 1e-15);
  EXPECT_DOUBLE_EQ(d.count(0), 1.5);
  EXPECT_THROW(DiscountedStats(2, 0.0), Error);
}

TEST(DiscountedUcb, UnitDiscountIsUcb) {
  env::SurrogateSpec spec;
  const ArmSpace arms = build_arm_space();
  for (ArmId a = 0; a < arms.size(); ++a) {
    spec.arms.push_back({a, arms.at(a), -0.3 + 0.013 * static_cast<double>(a % 7) + 0.001 * a, 0.05, 0.2, 0.05});
  }
  env::SurrogateEnv ea(spec, 8);
  env::SurrogateEnv eb(spec, 8);
  UcbPolicy u(arms.size(), 0.35);
  DiscountedUcbPolicy d(arms.size(), 0.35, 1.0);
  for (int t = 0; t < 300; ++t) {
    const ArmId x = u.select();
    const ArmId y = d.select();
    ASSERT_EQ(x, y) << "round " << t;
    u.update(x, {ea.play(x).reward.total, 0.0});
    d.update(y, {eb.play(y).reward.total, 0.0});
  }
}

TEST(DiscountedUcb, TieGoesToLowestId) {
  DiscountedUcbPolicy d(4, 0.35, 1.0);
  for (ArmId a = 0; a < 4; ++a) {
    EXPECT_EQ(d.select(), a);
    d.update(a, {0.5, 0.0});
  }
  EXPECT_EQ(d.select(), 0u);
}

T3PConfig no_restarts() {
  T3PConfig c;
  c.timer_period = 0;
  return c;
}

TEST(T3P, WarmupPlaysEveryArmInOrder) {
  T3PPolicy p(31, no_restarts(), 1);
  for (ArmId a = 0; a < 31; ++a) {
    EXPECT_EQ(p.phase_id(), T3PPhase::Warmup);
    EXPECT_EQ(p.epsilon(), 0.2);
    EXPECT_EQ(p.select(), a);
    p.update(a, {0.01 * static_cast<double>((a * 7) % 31), 0.3});
  }
  EXPECT_EQ(p.phase_id(), T3PPhase::Run);
}

TEST(T3P, PrunesToTopK) {
  T3PPolicy p(31, no_restarts(), 1);
  std::vector<double> q(31);
  for (ArmId a = 0; a < 31; ++a) {
    q[a] = 0.01 * static_cast<double>((a * 7) % 31);
    p.select();
    p.update(a, {q[a], 0.3});
  }
  EXPECT_EQ(p.state().active_count(), 25u);
  std::vector<double> sorted = q;
  std::sort(sorted.rbegin(), sorted.rend());
  for (ArmId a = 0; a < 31; ++a) EXPECT_EQ(p.state().is_active(a), q[a] >= sorted[24]) << a;
}

TEST(T3P, EpsilonDecaysPerRunRound) {
  T3PPolicy p(31, no_restarts(), 5);
  for (ArmId a = 0; a < 31; ++a) {
    p.select();
    p.update(a, {0.0, 0.3});
  }
  const std::vector<double> expected{0.2, 0.175, 0.15, 0.125, 0.1, 0.075, 0.05, 0.025, 0.0, 0.0, 0.0};
  for (double e : expected) {
    EXPECT_NEAR(p.epsilon(), e, 1e-12);
    const ArmId a = p.select();
    EXPECT_TRUE(p.state().is_active(a));
    p.update(a, {0.0, 0.3});
  }
}

TEST(T3P, SelectionsStayInActiveSet) {
  T3PConfig c = no_restarts();
  c.eps_start = 1.0;
  c.decay_step = 0.0;
  T3PPolicy p(31, c, 9);
  for (ArmId a = 0; a < 31; ++a) {
    p.select();
    p.update(a, {static_cast<double>(a), 0.3});
  }
  for (int i = 0; i < 2000; ++i) {
    const ArmId a = p.select();
    ASSERT_GE(a, 6u);
    p.update(a, {static_cast<double>(a), 0.3});
  }
}

TEST(T3P, PruneGreedyFallsToSecondBest) {
  T3PConfig c = no_restarts();
  c.eps_start = 0.0;
  c.k = 5;
  T3PPolicy p(5, c, 2);
  const std::vector<double> r{0.1, 0.5, 0.3, 0.4, 0.2};
  for (ArmId a = 0; a < 5; ++a) {
    p.select();
    p.update(a, {r[a], 0.3});
  }
  EXPECT_EQ(p.select(), 1u);
  p.prune(1);
  EXPECT_EQ(p.select(), 3u);
  EXPECT_EQ(p.greedy(), 3u);
}

TEST(T3P, PruneInactiveIsNoOpAndLastArmThrows) {
  T3PConfig c = no_restarts();
  c.k = 2;
  T3PPolicy p(4, c, 2);
  for (ArmId a = 0; a < 4; ++a) {
    p.select();
    p.update(a, {static_cast<double>(a), 0.3});
  }
  ASSERT_EQ(p.state().active_count(), 2u);
  p.prune(0);
  EXPECT_EQ(p.state().active_count(), 2u);
  p.prune(3);
  EXPECT_EQ(p.state().active_count(), 1u);
  try {
    p.prune(2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::LastArm);
  }
}

TEST(T3P, TimerRestartsWarmup) {
  T3PConfig c;
  c.timer_period = 40;
  T3PPolicy p(31, c, 3);
  for (int i = 0; i < 40; ++i) {
    const ArmId a = p.select();
    p.update(a, {0.0, 0.3});
  }
  EXPECT_EQ(p.restarts(), 1u);
  EXPECT_EQ(p.phase_id(), T3PPhase::Warmup);
  EXPECT_EQ(p.state().t(), 0u);
  EXPECT_EQ(p.select(), 0u);
}

TEST(T3P, SustainedBetaRiseRestarts) {
  T3PPolicy p(31, no_restarts(), 3);
  for (ArmId a = 0; a < 31; ++a) {
    p.select();
    p.update(a, {a == 4 ? 0.5 : 0.0, 0.3});
  }
  // Two spikes do not trigger; the third consecutive one does.
  for (int i = 0; i < 2; ++i) {
    p.update(4, {0.5, 0.5});
    EXPECT_EQ(p.restarts(), 0u);
  }
  p.update(4, {0.5, 0.3});
  p.update(4, {0.5, 0.9});
  p.update(4, {0.5, 0.9});
  EXPECT_EQ(p.restarts(), 0u);
  p.update(4, {0.5, 0.9});
  EXPECT_EQ(p.restarts(), 1u);
  EXPECT_EQ(p.phase_id(), T3PPhase::Warmup);
}

TEST(T3P, RestartClearsBans) {
  T3PConfig c = no_restarts();
  c.keep_estimates = true;
  T3PPolicy p(31, c, 3);
  for (ArmId a = 0; a < 31; ++a) {
    p.select();
    p.update(a, {0.0, 0.3});
  }
  p.prune(0);
  p.restart();
  EXPECT_TRUE(p.state().is_active(0));
  EXPECT_EQ(p.state().n(5), 1u);
}

TEST(T3P, ConfigValidation) {
  T3PConfig c;
  c.k = 0;
  EXPECT_THROW(T3PPolicy(31, c, 1), Error);
  c = T3PConfig{};
  c.eps_min = 0.3;
  EXPECT_THROW(T3PPolicy(31, c, 1), Error);
}

TEST(T3P, FindsClearlySeparatedOptimum) {
  // Best arm 3 pooled standard deviations above the rest.
  env::SurrogateSpec spec;
  const ArmSpace arms = build_arm_space();
  for (ArmId a = 0; a < arms.size(); ++a) {
    const double mean = a == 21 ? 0.0 : -0.15 - 0.01 * static_cast<double>(a % 5);
    spec.arms.push_back({a, arms.at(a), mean, 0.05, 0.2, 0.02});
  }
  int hits = 0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    env::SurrogateEnv e(spec, seed);
    T3PPolicy p(31, no_restarts(), seed + 1000);
    for (int t = 0; t < 75; ++t) {
      const ArmId a = p.select();
      const auto r = e.play(a);
      p.update(a, {r.reward.total, r.p_beta.value});
    }
    hits += p.greedy() == 21;
  }
  EXPECT_GE(hits, 95);
}

TEST(Factory, KnownNames) {
  for (auto name : kAlgorithms) {
    PolicyParams pp;
    pp.algorithm = std::string(name);
    const auto p = make_policy(pp, 31, 1);
    EXPECT_EQ(p->name(), name);
  }
  PolicyParams bad;
  bad.algorithm = "softmax";
  try {
    make_policy(bad, 31, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ConfigError);
  }
}

TEST(Factory, EveryPolicySupportsPrune) {
  for (auto name : kAlgorithms) {
    PolicyParams pp;
    pp.algorithm = std::string(name);
    auto p = make_policy(pp, 31, 4);
    for (int t = 0; t < 40; ++t) {
      const ArmId a = p->select();
      p->update(a, {a == 21 ? 0.1 : -0.2, 0.2});
    }
    p->prune(21);
    for (int t = 0; t < 40; ++t) {
      const ArmId a = p->select();
      ASSERT_NE(a, 21u) << name;
      p->update(a, {-0.2, 0.2});
    }
  }
}

}  // namespace
}  // namespace dbs::policy
