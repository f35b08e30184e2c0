#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include "dbs/bench/config.hpp"
#include "dbs/bench/experiment.hpp"
#include "dbs/bench/export.hpp"
#include "dbs/bench/runlog.hpp"

namespace dbs::bench {
namespace {

std::size_t count_lines(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

ExperimentConfig surrogate_cfg(std::size_t seeds, std::size_t rounds) {
  ExperimentConfig c;
  c.rounds = rounds;
  c.seeds.clear();
  for (std::uint64_t s = 1; s <= seeds; ++s) c.seeds.push_back(s);
  return c;
}

RunRecord record(std::uint64_t seed, std::size_t round, ArmId arm) {
  RunRecord r;
  r.policy = "x";
  r.seed = seed;
  r.round = round;
  r.arm = arm;
  return r;
}

TEST(Regret, HandPrefixSum) {
  RunLog log;
  log.records = {record(1, 1, 1), record(1, 2, 0)};
  const auto reg = compute_regret(log, 0, {1.0, 0.4});
  ASSERT_EQ(reg.cumulative.size(), 1u);
  EXPECT_NEAR(reg.cumulative[0][0], 0.6, 1e-15);
  EXPECT_NEAR(reg.cumulative[0][1], 0.6, 1e-15);
  EXPECT_NEAR(reg.instantaneous[0][1], 0.0, 1e-15);
}

TEST(Regret, OptimalPlayHasNone) {
  RunLog log;
  for (std::uint64_t s = 1; s <= 3; ++s) {
    for (std::size_t t = 1; t <= 5; ++t) log.records.push_back(record(s, t, 2));
  }
  const auto reg = compute_regret(log, 2, {0.1, 0.2, 0.3});
  for (double v : reg.cumulative_stats.mean) EXPECT_EQ(v, 0.0);
  for (double v : reg.cumulative_stats.std) EXPECT_EQ(v, 0.0);
}

TEST(Regret, CumulativeNeverDecreases) {
  const auto cfg = surrogate_cfg(5, 60);
  const auto log = run_experiment(cfg);
  const EnvironmentFactory f(cfg);
  const auto reg = compute_regret(log, build_arm_space().find(cfg.optimal_arm), *f.means());
  for (const auto& row : reg.cumulative) {
    for (std::size_t t = 1; t < row.size(); ++t) EXPECT_GE(row[t], row[t - 1]);
  }
}

TEST(Regret, UnknownArm) {
  RunLog log;
  log.records = {record(1, 1, 5)};
  try {
    compute_regret(log, 0, {1.0, 0.4});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::UnknownArm);
  }
}

TEST(Experiment, RecordCountAndCsvLines) {
  const auto log = run_experiment(surrogate_cfg(10, 75));
  EXPECT_EQ(log.records.size(), 750u);
  EXPECT_EQ(count_lines(runlog_body(log)), 751u);
}

TEST(Experiment, RerunIsBitwiseIdentical) {
  auto cfg = surrogate_cfg(6, 75);
  cfg.jobs = 1;
  const auto a = runlog_body(run_experiment(cfg));
  cfg.jobs = 3;
  const auto b = runlog_body(run_experiment(cfg));
  EXPECT_EQ(a, b);
}

TEST(Experiment, T3PImprovesOverWarmup) {
  const auto log = run_experiment(surrogate_cfg(30, 75));
  const auto s = reward_series(log);
  double warm = 0.0;
  double late = 0.0;
  for (std::size_t t = 0; t < 31; ++t) warm += s.mean[t];
  for (std::size_t t = 59; t < 75; ++t) late += s.mean[t];
  EXPECT_GT(late / 16.0, warm / 31.0);
}

TEST(Experiment, RecordsCarryPolicyState) {
  const auto log = run_experiment(surrogate_cfg(1, 40));
  const auto& r = log.records;
  EXPECT_EQ(r[0].phase, "warmup");
  EXPECT_EQ(r[30].phase, "warmup");
  EXPECT_EQ(r[31].phase, "run");
  EXPECT_DOUBLE_EQ(r[31].epsilon, 0.2);
  EXPECT_DOUBLE_EQ(r[32].epsilon, 0.175);
  for (const auto& x : r) {
    EXPECT_EQ(build_arm_space().at(x.arm), (StimParams{x.frequency_hz, x.amplitude}));
    EXPECT_TRUE(std::isnan(x.r1));
    EXPECT_GE(x.regret, 0.0);
  }
}

TEST(Experiment, ComparisonKeepsOrder) {
  auto cfg = surrogate_cfg(2, 10);
  cfg.compare = {"random", "ucb"};
  const auto parts = split_by_policy(run_comparison(cfg));
  ASSERT_EQ(parts.size(), 2u);
  EXPECT_EQ(parts[0].first, "random");
  EXPECT_EQ(parts[1].second.records.size(), 20u);
}

TEST(RunLogCsv, RoundTrip) {
  auto log = run_experiment(surrogate_cfg(3, 20));
  log.records[4].regret = std::nan("");
  std::stringstream ss;
  write_runlog(ss, log);
  const auto back = parse_runlog(ss);
  EXPECT_EQ(back.fingerprint, log.fingerprint);
  EXPECT_EQ(back.version, log.version);
  ASSERT_EQ(back.records.size(), log.records.size());
  for (std::size_t i = 0; i < log.records.size(); ++i) EXPECT_EQ(to_csv_row(back.records[i]), to_csv_row(log.records[i]));
  EXPECT_EQ(runlog_body(back), runlog_body(log));
}

TEST(RunLogCsv, EmptyHasHeaderOnly) {
  EXPECT_EQ(runlog_body(RunLog{}), std::string(kRunLogColumns) + "\n");
  std::ostringstream os;
  write_rewards_csv(os, {});
  EXPECT_EQ(os.str(), std::string(kRewardColumns) + "\n");
}

TEST(RunLogCsv, BadRow) {
  std::stringstream ss(std::string(kRunLogColumns) + "\nt3p,1,1\n");
  try {
    parse_runlog(ss);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ParseError);
  }
}

TEST(Export, RegretAndHeatmapCsv) {
  RunLog log;
  log.records = {record(1, 1, 1), record(1, 2, 0), record(2, 1, 1), record(2, 2, 1)};
  const auto reg = compute_regret(log, 0, {1.0, 0.4});
  std::ostringstream os;
  write_regret_csv(os, {{"x", reg}});
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  EXPECT_EQ(line, kRegretColumns);
  std::getline(is, line);
  auto f = csv::split(line);
  ASSERT_EQ(f.size(), 6u);
  EXPECT_EQ(f[0], "x");
  EXPECT_DOUBLE_EQ(csv::parse_double(f[2]), 0.6);
  EXPECT_DOUBLE_EQ(csv::parse_double(f[4]), 0.6);
  std::getline(is, line);
  f = csv::split(line);
  EXPECT_DOUBLE_EQ(csv::parse_double(f[2]), 0.3);
  EXPECT_DOUBLE_EQ(csv::parse_double(f[3]), std::sqrt(0.18));
  EXPECT_DOUBLE_EQ(csv::parse_double(f[4]), 0.9);
  EXPECT_FALSE(std::getline(is, line));
  std::ostringstream hm;
  write_heatmap_csv(hm, {{0.2, 25, 1.5, 0.25}});
  EXPECT_EQ(hm.str(), std::string(kHeatmapColumns) + "\n0.20000000000000001,25,1.5,0.25\n");
}

TEST(Export, SvgIsWellFormed) {
  const auto log = run_experiment(surrogate_cfg(2, 10));
  const std::string a = runlog_svg(log);
  EXPECT_EQ(a.rfind("<svg", 0), 0u);
  EXPECT_NE(a.find("</svg>"), std::string::npos);
  std::vector<GridCell> cells{{0.1, 5, -3.0, 0.1}, {0.1, 10, -2.0, 0.1}, {0.2, 5, -1.0, 0.1}, {0.2, 10, 0.5, 0.1}};
  const std::string h = heatmap_svg(cells);
  EXPECT_NE(h.find("</svg>"), std::string::npos);
  EXPECT_EQ(rewards_svg({{"a&b", reward_series(log)}}).find("a&b"), std::string::npos);
}

TEST(Grid, DefaultsGiveThirtySixCells) {
  auto cfg = surrogate_cfg(1, 40);
  auto grid = cfg.grid;
  grid.runs_per_cell = 2;
  EXPECT_EQ(grid_search(cfg, grid, 100).size(), 36u);
}

TEST(Grid, SingleCellMatchesExperiment) {
  auto cfg = surrogate_cfg(1, 75);
  GridConfig grid;
  grid.eps = {0.3};
  grid.k = {15};
  grid.runs_per_cell = 4;
  const auto cells = grid_search(cfg, grid, 500);
  ASSERT_EQ(cells.size(), 1u);

  cfg.seeds = {500, 501, 502, 503};
  cfg.policy.t3p.eps_start = 0.3;
  cfg.policy.t3p.k = 15;
  const auto log = run_experiment(cfg);
  double sum = 0.0;
  for (const auto& r : log.records) sum += r.reward;
  EXPECT_NEAR(cells[0].mean_total_reward, sum / 4.0, 1e-12);
}

TEST(Intervention, PruningNeverGreedyArmChangesNothing) {
  auto cfg = surrogate_cfg(5, 100);
  cfg.policy.t3p.eps_start = 0.0;
  // Restarts would replay the warm-up, which visits every arm.
  cfg.policy.t3p.deviation_threshold = 1e9;
  const auto base = run_experiment(cfg);
  // The off arm has the lowest mean in the default spec.
  for (const auto& r : base.records) {
    if (r.round > 31) {
      ASSERT_NE(r.greedy_arm, 0u);
    }
  }
  cfg.interventions.push_back({60, StimParams{}, false});
  const auto pruned = run_experiment(cfg);
  ASSERT_EQ(pruned.records.size(), base.records.size());
  for (std::size_t i = 0; i < base.records.size(); ++i) {
    EXPECT_EQ(pruned.records[i].greedy_arm, base.records[i].greedy_arm);
    EXPECT_EQ(pruned.records[i].arm, base.records[i].arm);
  }
}

TEST(Intervention, ReportFindsNewTarget) {
  auto cfg = surrogate_cfg(4, 130);
  cfg.interventions.push_back({75, cfg.optimal_arm, false});
  const auto res = intervention_run(cfg);
  ASSERT_EQ(res.report.size(), 4u);
  const auto spec = env::load_surrogate_spec(env::default_surrogate_path());
  auto means = spec.reward_means();
  const ArmId opt = build_arm_space().find(cfg.optimal_arm);
  means[opt] = -1e9;
  const auto second = static_cast<ArmId>(std::max_element(means.begin(), means.end()) - means.begin());
  for (const auto& row : res.report) {
    EXPECT_EQ(row.pruned_arm, opt);
    EXPECT_EQ(row.target_arm, second);
    if (row.stable_from) {
      EXPECT_GT(*row.stable_from, 75u);
    }
  }
  for (const auto& r : res.log.records) {
    if (r.round > 75) {
      ASSERT_NE(r.arm, opt);
    }
  }
}

TEST(Intervention, EventAfterLastRound) {
  auto cfg = surrogate_cfg(1, 75);
  cfg.interventions.push_back({75, cfg.optimal_arm, false});
  try {
    intervention_run(cfg);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ConfigError);
  }
}

TEST(Intervention, RestartReplaysWarmup) {
  auto cfg = surrogate_cfg(1, 80);
  cfg.interventions.push_back({40, cfg.optimal_arm, true});
  const auto log = run_experiment(cfg);
  EXPECT_EQ(log.records[40].phase, "warmup");
  EXPECT_EQ(log.records[40].arm, 0u);
}

TEST(Config, ParsesAndRoundTrips) {
  const auto c = parse_config_text(R"({
    "rounds": 50, "seeds": [3, 4],
    "policy": {"algorithm": "ucb", "ucb_c": 0.2, "t3p": {"k": 20}},
    "interventions": [{"round": 10, "arm": {"frequency_hz": 155, "amplitude": 1000}}]
  })");
  EXPECT_EQ(c.rounds, 50u);
  EXPECT_EQ(c.policy.algorithm, "ucb");
  EXPECT_EQ(c.policy.t3p.k, 20u);
  ASSERT_EQ(c.interventions.size(), 1u);
  const auto again = parse_config(to_json(c));
  EXPECT_EQ(to_json(again), to_json(c));
  EXPECT_EQ(fingerprint(again), fingerprint(c));
}

TEST(Config, RejectsUnknownKeys) {
  for (const char* text : {R"({"round": 5})", R"({"policy": {"epsilon": 0.1}})", R"({"grid": {"eps": [0.1], "x": 1}})"}) {
    try {
      parse_config_text(text);
      FAIL() << text;
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::ConfigError) << text;
    }
  }
}

TEST(Config, RejectsBadValues) {
  for (const char* text : {R"({"rounds": 0})", R"({"policy": {"algorithm": "softmax"}})",
                           R"({"optimal_arm": {"frequency_hz": 140, "amplitude": 1000}})",
                           R"({"sampling_rate_hz": 50000})", R"({"rounds": "many"})", "{"}) {
    try {
      parse_config_text(text);
      FAIL() << text;
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::ConfigError) << text;
    }
  }
}

TEST(Config, FingerprintTracksResults) {
  ExperimentConfig a;
  ExperimentConfig b;
  EXPECT_EQ(fingerprint(a), fingerprint(b));
  EXPECT_EQ(fingerprint(a).size(), 16u);
  b.jobs = 4;
  b.output.dir = "elsewhere";
  EXPECT_EQ(fingerprint(a), fingerprint(b));
  b.rounds = 76;
  EXPECT_NE(fingerprint(a), fingerprint(b));
}

TEST(Config, ShippedConfigsParse) {
  std::size_t count = 0;
  for (const auto& entry : std::filesystem::directory_iterator(std::string(DBS_SOURCE_DIR) + "/configs")) {
    if (entry.path().extension() != ".json") continue;
    EXPECT_NO_THROW(load_config(entry.path().string())) << entry.path();
    ++count;
  }
  EXPECT_GE(count, 5u);
}

TEST(Parallel, PropagatesErrors) {
  EXPECT_THROW(parallel_for(8, 3,
                            [](std::size_t i) {
                              if (i == 5) throw Error(ErrorKind::InvalidArgument, "boom");
                            }),
               Error);
}

}  // namespace
}  // namespace dbs::bench
