#pragma once

// Selection rules as free functions over a BanditState.

#include <cmath>
#include <random>
#include <vector>

#include <boost/math/distributions/normal.hpp>

#include "dbs/error.hpp"
#include "dbs/policy/bandit_state.hpp"

namespace dbs::policy {

inline ArmId ucb_select(const BanditState& s, double c) {
  if (auto a = first_unplayed(s)) return *a;
  const double log_t = std::log(static_cast<double>(std::max<std::size_t>(s.t(), 1)));
  return argmax_active(s, [&](ArmId a) {
    return s.q(a) + c * std::sqrt(log_t / static_cast<double>(s.n(a)));
  });
}

/// One uniform draw decides explore vs exploit; exploring draws a second
/// uniform index into the active arms.
template <typename Rng>
ArmId eps_greedy_select(const BanditState& s, double eps, Rng& rng) {
  if (!(eps >= 0.0 && eps <= 1.0)) throw Error(ErrorKind::InvalidArgument, "epsilon outside [0, 1]");
  std::uniform_real_distribution<double> u(0.0, 1.0);
  if (u(rng) < eps) {
    const auto active = s.active();
    std::uniform_int_distribution<std::size_t> pick(0, active.size() - 1);
    return active[pick(rng)];
  }
  return greedy_arm(s);
}

template <typename Rng>
ArmId uniform_select(const BanditState& s, Rng& rng) {
  const auto active = s.active();
  std::uniform_int_distribution<std::size_t> pick(0, active.size() - 1);
  return active[pick(rng)];
}

struct GaussianPrior {
  double mu0 = 0.0;
  double sigma0_sq = 0.01;
};

/// Per-arm Gaussian belief: mean is the running reward mean (prior mean when
/// unplayed), variance shrinks as sigma0^2 / (n + 1).
struct Posterior {
  std::vector<double> mu;
  std::vector<double> var;
};

inline Posterior gaussian_posterior(const BanditState& s, const GaussianPrior& prior) {
  Posterior p;
  p.mu.resize(s.arm_count());
  p.var.resize(s.arm_count());
  for (ArmId a = 0; a < s.arm_count(); ++a) {
    p.mu[a] = s.n(a) > 0 ? s.q(a) : prior.mu0;
    p.var[a] = prior.sigma0_sq / static_cast<double>(s.n(a) + 1);
  }
  return p;
}

/// Draws one standard normal per active arm in id order.
template <typename Rng>
ArmId thompson_select(const BanditState& s, const Posterior& post, Rng& rng) {
  std::normal_distribution<double> z(0.0, 1.0);
  std::vector<double> theta(s.arm_count(), 0.0);
  for (ArmId a = 0; a < s.arm_count(); ++a) {
    if (s.is_active(a)) theta[a] = post.mu[a] + std::sqrt(post.var[a]) * z(rng);
  }
  return argmax_active(s, [&](ArmId a) { return theta[a]; });
}

/// Standard-normal quantile at 1 - 1/t; zero for t < 2.
inline double bayes_ucb_quantile(std::size_t t) {
  if (t < 2) return 0.0;
  const boost::math::normal_distribution<double> std_normal(0.0, 1.0);
  return boost::math::quantile(std_normal, 1.0 - 1.0 / static_cast<double>(t));
}

inline ArmId bayes_ucb_select(const BanditState& s, const Posterior& post, double c) {
  if (auto a = first_unplayed(s)) return *a;
  const double z = bayes_ucb_quantile(s.t());
  return argmax_active(s, [&](ArmId a) { return post.mu[a] + c * z * std::sqrt(post.var[a]); });
}

/// Exponentially discounted counts and means. After each play every count is
/// scaled by the discount and the played arm's count gains one.
class DiscountedStats {
 public:
  DiscountedStats(std::size_t arms, double discount) : count_(arms, 0.0), mean_(arms, 0.0), discount_(discount) {
    if (!(discount > 0.0 && discount <= 1.0)) {
      throw Error(ErrorKind::InvalidArgument, "discount outside (0, 1]");
    }
  }

  void update(ArmId arm, double reward) {
    if (arm >= count_.size()) throw Error(ErrorKind::UnknownArm, "arm id " + std::to_string(arm));
    for (double& c : count_) c *= discount_;
    count_[arm] += 1.0;
    mean_[arm] += (reward - mean_[arm]) / count_[arm];
  }

  double count(ArmId a) const { return count_.at(a); }
  double mean(ArmId a) const { return mean_.at(a); }
  double total() const {
    double t = 0.0;
    for (double c : count_) t += c;
    return t;
  }
  double discount() const noexcept { return discount_; }
  void reset() {
    std::fill(count_.begin(), count_.end(), 0.0);
    std::fill(mean_.begin(), mean_.end(), 0.0);
  }

 private:
  std::vector<double> count_;
  std::vector<double> mean_;
  double discount_;
};

/// `s` supplies the active set and raw play counts for unplayed-first.
inline ArmId discounted_ucb_select(const BanditState& s, const DiscountedStats& d, double c) {
  if (auto a = first_unplayed(s)) return *a;
  const double log_n = std::log(std::max(d.total(), 1.0));
  return argmax_active(s, [&](ArmId a) { return d.mean(a) + c * std::sqrt(log_n / d.count(a)); });
}

}  // namespace dbs::policy
