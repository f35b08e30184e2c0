#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "dbs/error.hpp"
#include "dbs/stim.hpp"

namespace dbs::policy {

/// Per-arm running means and counts plus the set of arms still in play.
class BanditState {
 public:
  explicit BanditState(std::size_t arms) : q_(arms, 0.0), n_(arms, 0), active_(arms, true) {
    if (arms == 0) throw Error(ErrorKind::InvalidArgument, "need at least one arm");
  }

  std::size_t arm_count() const noexcept { return q_.size(); }
  double q(ArmId a) const { return q_.at(a); }
  std::size_t n(ArmId a) const { return n_.at(a); }
  const std::vector<double>& q() const noexcept { return q_; }
  const std::vector<std::size_t>& n() const noexcept { return n_; }
  /// Number of recorded observations.
  std::size_t t() const noexcept { return t_; }

  bool is_active(ArmId a) const { return active_.at(a); }
  std::vector<ArmId> active() const {
    std::vector<ArmId> out;
    for (ArmId a = 0; a < active_.size(); ++a) {
      if (active_[a]) out.push_back(a);
    }
    return out;
  }
  std::size_t active_count() const noexcept {
    std::size_t c = 0;
    for (bool b : active_) c += b ? 1 : 0;
    return c;
  }

  void record(ArmId a, double reward) {
    check(a);
    ++n_[a];
    q_[a] += (reward - q_[a]) / static_cast<double>(n_[a]);
    ++t_;
  }

  /// Removes an arm from play. Inactive arms are ignored; the last active arm
  /// cannot be removed.
  void deactivate(ArmId a) {
    check(a);
    if (!active_[a]) return;
    if (active_count() == 1) throw Error(ErrorKind::LastArm, "cannot prune the last active arm");
    active_[a] = false;
  }

  void set_active(const std::vector<ArmId>& arms) {
    if (arms.empty()) throw Error(ErrorKind::LastArm, "active set would be empty");
    std::vector<bool> next(active_.size(), false);
    for (ArmId a : arms) {
      check(a);
      next[a] = true;
    }
    active_ = std::move(next);
  }

  void reset_estimates() {
    std::fill(q_.begin(), q_.end(), 0.0);
    std::fill(n_.begin(), n_.end(), 0);
    t_ = 0;
  }

  void activate_all() { std::fill(active_.begin(), active_.end(), true); }

 private:
  void check(ArmId a) const {
    if (a >= q_.size()) throw Error(ErrorKind::UnknownArm, "arm id " + std::to_string(a) + " out of range");
  }

  std::vector<double> q_;
  std::vector<std::size_t> n_;
  std::vector<bool> active_;
  std::size_t t_ = 0;
};

/// Lowest-id active arm never played.
inline std::optional<ArmId> first_unplayed(const BanditState& s) {
  for (ArmId a = 0; a < s.arm_count(); ++a) {
    if (s.is_active(a) && s.n(a) == 0) return a;
  }
  return std::nullopt;
}

/// Argmax over active arms of score(a); the lowest id wins ties.
template <typename Score>
ArmId argmax_active(const BanditState& s, Score&& score) {
  std::optional<ArmId> best;
  double best_v = 0.0;
  for (ArmId a = 0; a < s.arm_count(); ++a) {
    if (!s.is_active(a)) continue;
    const double v = score(a);
    if (!best || v > best_v) {
      best = a;
      best_v = v;
    }
  }
  return *best;
}

inline ArmId greedy_arm(const BanditState& s) {
  return argmax_active(s, [&](ArmId a) { return s.q(a); });
}

}  // namespace dbs::policy
