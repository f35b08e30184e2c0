#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <thread>
#include <vector>

#include "dbs/bench/config.hpp"
#include "dbs/bench/runlog.hpp"
#include "dbs/env/bgt.hpp"
#include "dbs/env/surrogate.hpp"
#include "dbs/error.hpp"
#include "dbs/policy/factory.hpp"

namespace dbs::bench {

/// Runs fn(i) for i in [0, n) on up to `jobs` threads (0: hardware count).
/// The first exception thrown by any task is rethrown.
template <typename Fn>
void parallel_for(std::size_t n, std::size_t jobs, Fn&& fn) {
  if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
  jobs = std::min(jobs, n);
  if (jobs <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> workers;
  for (std::size_t w = 0; w < jobs; ++w) {
    workers.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : workers) t.join();
  if (error) std::rethrow_exception(error);
}

/// Policy streams are decorrelated from environment streams of the same seed.
inline std::uint64_t policy_seed(std::uint64_t seed) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Loads shared inputs once and builds one environment per seed.
class EnvironmentFactory {
 public:
  explicit EnvironmentFactory(const ExperimentConfig& cfg) : cfg_(cfg) {
    const auto& e = cfg.environment;
    if (e.kind == EnvKind::Surrogate) {
      spec_ = env::load_surrogate_spec(e.spec.empty() ? env::default_surrogate_path() : e.spec);
      means_ = spec_->reward_means();
    } else {
      params_ = std::make_shared<const neuro::ModelParams>(
          e.model.empty() ? neuro::default_model_params() : neuro::load_model_params(e.model));
      if (!e.means.empty()) means_ = env::load_surrogate_spec(e.means).reward_means();
    }
  }

  std::unique_ptr<env::Environment> make(std::uint64_t seed) const {
    if (spec_) return std::make_unique<env::SurrogateEnv>(*spec_, seed);
    return std::make_unique<env::BgtEnv>(bgt_config(), seed);
  }

  env::BgtEnvConfig bgt_config() const {
    const auto& e = cfg_.environment;
    env::BgtEnvConfig b;
    b.condition = neuro::parse_condition(e.condition);
    b.neurons_per_region = e.neurons_per_region;
    b.round_ms = cfg_.round_length_ms;
    b.dt_ms = cfg_.dt_ms;
    b.warm_in_ms = e.warm_in_ms;
    b.baseline_rounds = e.baseline_rounds;
    b.p_beta_norm_ref = cfg_.p_beta_norm_ref;
    b.reward = cfg_.reward;
    b.path = parse_beta_path(e.beta_path);
    b.method = beta_method(e);
    b.params = params_;
    return b;
  }

  /// True per-arm mean rewards, when known.
  const std::optional<std::vector<double>>& means() const noexcept { return means_; }

 private:
  ExperimentConfig cfg_;
  std::optional<env::SurrogateSpec> spec_;
  std::shared_ptr<const neuro::ModelParams> params_;
  std::optional<std::vector<double>> means_;
};

/// One closed-loop episode: select, play, update, then any interventions
/// scheduled for that round.
inline std::vector<RunRecord> run_episode(const ExperimentConfig& cfg, const EnvironmentFactory& factory,
                                          const policy::PolicyParams& pp, std::uint64_t seed) {
  auto environment = factory.make(seed);
  const ArmSpace& arms = environment->arms();
  auto pol = policy::make_policy(pp, arms.size(), policy_seed(seed));
  const auto& means = factory.means();
  std::optional<ArmId> optimal;
  if (means) {
    optimal = arms.find(cfg.optimal_arm);
    if (*optimal >= means->size()) throw Error(ErrorKind::UnknownArm, "optimal arm has no mean");
  }

  std::vector<RunRecord> out;
  out.reserve(cfg.rounds);
  for (std::size_t round = 1; round <= cfg.rounds; ++round) {
    RunRecord rec;
    rec.policy = pol->name();
    rec.seed = seed;
    rec.round = round;
    rec.epsilon = pol->epsilon();
    rec.phase = pol->phase();
    const ArmId arm = pol->select();
    const env::RoundResult res = environment->play(arm);
    pol->update(arm, {res.reward.total, res.p_beta.value});

    rec.arm = arm;
    rec.frequency_hz = arms.at(arm).frequency_hz;
    rec.amplitude = arms.at(arm).amplitude;
    rec.r1 = res.reward.r1;
    rec.r2 = res.reward.r2;
    rec.r3 = res.reward.r3;
    rec.reward = res.reward.total;
    rec.p_beta = res.p_beta.value;
    rec.regret = optimal ? (*means)[*optimal] - means->at(arm) : std::numeric_limits<double>::quiet_NaN();

    for (const auto& iv : cfg.interventions) {
      if (iv.round != round) continue;
      if (iv.restart) {
        if (auto* t3p = dynamic_cast<policy::T3PPolicy*>(pol.get())) t3p->restart();
      }
      pol->prune(arms.find(iv.arm));
    }
    rec.greedy_arm = pol->greedy();
    out.push_back(std::move(rec));
  }
  return out;
}

inline RunLog run_policy(const ExperimentConfig& cfg, const EnvironmentFactory& factory,
                         const policy::PolicyParams& pp, const std::vector<std::uint64_t>& seeds) {
  std::vector<std::vector<RunRecord>> per_seed(seeds.size());
  parallel_for(seeds.size(), cfg.jobs, [&](std::size_t i) { per_seed[i] = run_episode(cfg, factory, pp, seeds[i]); });
  RunLog log;
  log.fingerprint = fingerprint(cfg);
  log.version = kCodeVersion;
  for (auto& v : per_seed) {
    for (auto& r : v) log.records.push_back(std::move(r));
  }
  return log;
}

inline RunLog run_experiment(const ExperimentConfig& cfg) {
  validate(cfg);
  const EnvironmentFactory factory(cfg);
  return run_policy(cfg, factory, cfg.policy, cfg.seeds);
}

/// One log holding every policy named in cfg.compare, in that order.
inline RunLog run_comparison(const ExperimentConfig& cfg) {
  validate(cfg);
  const EnvironmentFactory factory(cfg);
  RunLog all;
  all.fingerprint = fingerprint(cfg);
  all.version = kCodeVersion;
  for (const auto& name : cfg.compare) {
    policy::PolicyParams pp = cfg.policy;
    pp.algorithm = name;
    auto log = run_policy(cfg, factory, pp, cfg.seeds);
    for (auto& r : log.records) all.records.push_back(std::move(r));
  }
  return all;
}

struct SeriesStats {
  std::vector<double> mean;
  std::vector<double> std;  ///< sample standard deviation; 0 with one seed
};

struct RegretSeries {
  std::vector<std::uint64_t> seeds;
  std::vector<std::vector<double>> instantaneous;  ///< [seed][round]
  std::vector<std::vector<double>> cumulative;     ///< [seed][round]
  SeriesStats instantaneous_stats;
  SeriesStats cumulative_stats;

  std::size_t rounds() const noexcept { return instantaneous_stats.mean.size(); }
};

namespace detail {

inline SeriesStats across_seeds(const std::vector<std::vector<double>>& rows) {
  SeriesStats s;
  if (rows.empty()) return s;
  const std::size_t n = rows.front().size();
  s.mean.assign(n, 0.0);
  s.std.assign(n, 0.0);
  for (std::size_t t = 0; t < n; ++t) {
    double m = 0.0;
    for (const auto& r : rows) m += r[t];
    m /= static_cast<double>(rows.size());
    double ss = 0.0;
    for (const auto& r : rows) ss += (r[t] - m) * (r[t] - m);
    s.mean[t] = m;
    s.std[t] = rows.size() > 1 ? std::sqrt(ss / static_cast<double>(rows.size() - 1)) : 0.0;
  }
  return s;
}

/// Groups a single-policy log into [seed][round] using `value`.
template <typename Value>
std::pair<std::vector<std::uint64_t>, std::vector<std::vector<double>>> by_seed(const RunLog& log, Value&& value) {
  std::map<std::uint64_t, std::vector<std::pair<std::size_t, double>>> groups;
  for (const auto& r : log.records) groups[r.seed].emplace_back(r.round, value(r));
  std::vector<std::uint64_t> seeds;
  std::vector<std::vector<double>> rows;
  std::size_t expected = 0;
  for (auto& [seed, items] : groups) {
    std::sort(items.begin(), items.end());
    if (rows.empty()) expected = items.size();
    if (items.size() != expected) throw Error(ErrorKind::InvalidArgument, "seeds have different round counts");
    std::vector<double> row;
    for (std::size_t i = 0; i < items.size(); ++i) {
      if (items[i].first != i + 1) throw Error(ErrorKind::InvalidArgument, "missing or repeated round");
      row.push_back(items[i].second);
    }
    seeds.push_back(seed);
    rows.push_back(std::move(row));
  }
  return {seeds, rows};
}

}  // namespace detail

/// Regret of each played arm against `optimal` under the true means.
inline RegretSeries compute_regret(const RunLog& log, ArmId optimal, const std::vector<double>& means) {
  if (optimal >= means.size()) throw Error(ErrorKind::UnknownArm, "optimal arm id " + std::to_string(optimal));
  for (const auto& r : log.records) {
    if (r.arm >= means.size()) throw Error(ErrorKind::UnknownArm, "arm id " + std::to_string(r.arm));
  }
  RegretSeries out;
  auto [seeds, inst] = detail::by_seed(log, [&](const RunRecord& r) { return means[optimal] - means[r.arm]; });
  out.seeds = std::move(seeds);
  out.instantaneous = std::move(inst);
  for (const auto& row : out.instantaneous) {
    std::vector<double> cum(row.size());
    double acc = 0.0;
    for (std::size_t t = 0; t < row.size(); ++t) cum[t] = acc += row[t];
    out.cumulative.push_back(std::move(cum));
  }
  out.instantaneous_stats = detail::across_seeds(out.instantaneous);
  out.cumulative_stats = detail::across_seeds(out.cumulative);
  return out;
}

/// Mean and spread of the instantaneous reward per round.
inline SeriesStats reward_series(const RunLog& log) {
  return detail::across_seeds(detail::by_seed(log, [](const RunRecord& r) { return r.reward; }).second);
}

/// Splits a multi-policy log, keeping first-appearance order.
inline std::vector<std::pair<std::string, RunLog>> split_by_policy(const RunLog& log) {
  std::vector<std::pair<std::string, RunLog>> out;
  for (const auto& r : log.records) {
    auto it = std::find_if(out.begin(), out.end(), [&](const auto& p) { return p.first == r.policy; });
    if (it == out.end()) {
      out.emplace_back(r.policy, RunLog{log.fingerprint, log.version, {}});
      it = out.end() - 1;
    }
    it->second.records.push_back(r);
  }
  return out;
}

struct GridCell {
  double eps = 0.0;
  std::size_t k = 0;
  double mean_total_reward = 0.0;
  double std_total_reward = 0.0;
};

/// T3P over every (eps_start, K) pair; each cell runs seeds
/// seed_base, seed_base + 1, ... and reports the mean cumulative reward.
inline std::vector<GridCell> grid_search(const ExperimentConfig& cfg, const GridConfig& grid, std::uint64_t seed_base) {
  validate(cfg);
  if (grid.eps.empty() || grid.k.empty() || grid.runs_per_cell < 1) {
    throw Error(ErrorKind::ConfigError, "empty grid");
  }
  const EnvironmentFactory factory(cfg);
  std::vector<std::uint64_t> seeds;
  for (std::size_t i = 0; i < grid.runs_per_cell; ++i) seeds.push_back(seed_base + i);
  std::vector<GridCell> cells;
  for (double eps : grid.eps) {
    for (std::size_t k : grid.k) {
      policy::PolicyParams pp = cfg.policy;
      pp.algorithm = "t3p";
      pp.t3p.eps_start = eps;
      pp.t3p.eps_min = std::min(pp.t3p.eps_min, eps);
      pp.t3p.k = k;
      const RunLog log = run_policy(cfg, factory, pp, seeds);
      std::vector<double> totals;
      for (const auto& row : detail::by_seed(log, [](const RunRecord& r) { return r.reward; }).second) {
        double s = 0.0;
        for (double x : row) s += x;
        totals.push_back(s);
      }
      double mean = 0.0;
      for (double x : totals) mean += x;
      mean /= static_cast<double>(totals.size());
      double ss = 0.0;
      for (double x : totals) ss += (x - mean) * (x - mean);
      const double sd = totals.size() > 1 ? std::sqrt(ss / static_cast<double>(totals.size() - 1)) : 0.0;
      cells.push_back({eps, k, mean, sd});
    }
  }
  return cells;
}

inline const GridCell& best_cell(const std::vector<GridCell>& cells) {
  if (cells.empty()) throw Error(ErrorKind::InvalidArgument, "no grid cells");
  std::size_t best = 0;
  for (std::size_t i = 1; i < cells.size(); ++i) {
    if (cells[i].mean_total_reward > cells[best].mean_total_reward) best = i;
  }
  return cells[best];
}

inline constexpr std::size_t kStableRun = 10;

struct ConvergenceRow {
  std::uint64_t seed = 0;
  std::size_t event_round = 0;
  ArmId pruned_arm = 0;
  ArmId target_arm = 0;  ///< best remaining arm under the true means
  std::optional<std::size_t> stable_from;  ///< first round of >= 10 consecutive target plays
};

struct InterventionResult {
  RunLog log;
  std::vector<ConvergenceRow> report;
};

/// Runs cfg.policy with cfg.interventions and reports, per seed and event,
/// when play settles on the best arm still available.
inline InterventionResult intervention_run(const ExperimentConfig& cfg) {
  validate(cfg);
  if (cfg.interventions.empty()) throw Error(ErrorKind::ConfigError, "no intervention events");
  const EnvironmentFactory factory(cfg);
  if (!factory.means()) throw Error(ErrorKind::ConfigError, "intervention report needs environment means");
  const auto& means = *factory.means();
  const ArmSpace arms = build_arm_space();

  InterventionResult out;
  out.log = run_policy(cfg, factory, cfg.policy, cfg.seeds);

  std::vector<bool> removed(means.size(), false);
  std::vector<std::pair<std::size_t, ArmId>> events;  // (round, target)
  std::vector<Intervention> sorted = cfg.interventions;
  std::stable_sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) { return a.round < b.round; });
  for (const auto& iv : sorted) {
    removed[arms.find(iv.arm)] = true;
    std::optional<ArmId> target;
    for (ArmId a = 0; a < means.size(); ++a) {
      if (!removed[a] && (!target || means[a] > means[*target])) target = a;
    }
    if (!target) throw Error(ErrorKind::ConfigError, "interventions remove every arm");
    events.emplace_back(iv.round, *target);
  }

  const auto [seeds, plays] = detail::by_seed(out.log, [](const RunRecord& r) { return static_cast<double>(r.arm); });
  for (std::size_t s = 0; s < seeds.size(); ++s) {
    for (std::size_t e = 0; e < events.size(); ++e) {
      ConvergenceRow row;
      row.seed = seeds[s];
      row.event_round = events[e].first;
      row.pruned_arm = arms.find(sorted[e].arm);
      row.target_arm = events[e].second;
      const std::size_t end = e + 1 < events.size() ? events[e + 1].first : plays[s].size();
      std::size_t streak = 0;
      for (std::size_t round = row.event_round + 1; round <= end; ++round) {
        streak = static_cast<ArmId>(plays[s][round - 1]) == row.target_arm ? streak + 1 : 0;
        if (streak == kStableRun) {
          row.stable_from = round - kStableRun + 1;
          break;
        }
      }
      out.report.push_back(row);
    }
  }
  return out;
}

}  // namespace dbs::bench
