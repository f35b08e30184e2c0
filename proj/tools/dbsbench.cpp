// Command-line front end for the adaptive DBS workbench.

#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "dbs/bench/calibration.hpp"
#include "dbs/bench/config.hpp"
#include "dbs/bench/experiment.hpp"
#include "dbs/bench/export.hpp"

namespace fs = std::filesystem;
using namespace dbs;

namespace {

/// "1-30", "1,2,7" or a mix such as "1-3,9".
std::vector<std::uint64_t> parse_seeds(const std::string& text) {
  std::vector<std::uint64_t> out;
  for (auto part : csv::split(text)) {
    const auto dash = part.find('-');
    if (dash == std::string_view::npos) {
      out.push_back(csv::parse_integer<std::uint64_t>(part));
      continue;
    }
    const auto lo = csv::parse_integer<std::uint64_t>(part.substr(0, dash));
    const auto hi = csv::parse_integer<std::uint64_t>(part.substr(dash + 1));
    if (hi < lo) throw Error(ErrorKind::ConfigError, "empty seed range '" + std::string(part) + "'");
    for (auto s = lo; s <= hi; ++s) out.push_back(s);
  }
  return out;
}

struct Overrides {
  std::string config;
  std::string seeds;
  std::size_t rounds = 0;
  std::string env;
  std::string policy;
  std::string out_dir;
  std::vector<std::string> formats;
};

bench::ExperimentConfig build_config(const Overrides& o) {
  bench::ExperimentConfig cfg = o.config.empty() ? bench::ExperimentConfig{} : bench::load_config(o.config);
  if (!o.seeds.empty()) cfg.seeds = parse_seeds(o.seeds);
  if (o.rounds) cfg.rounds = o.rounds;
  if (o.env == "surrogate") {
    cfg.environment.kind = bench::EnvKind::Surrogate;
  } else if (o.env == "bgt") {
    cfg.environment.kind = bench::EnvKind::Bgt;
  } else if (!o.env.empty()) {
    throw Error(ErrorKind::ConfigError, "--env must be surrogate or bgt");
  }
  if (!o.policy.empty()) {
    const auto names = csv::split(o.policy);
    cfg.policy.algorithm = std::string(names.front());
    cfg.compare.clear();
    for (auto n : names) cfg.compare.emplace_back(n);
  }
  if (!o.out_dir.empty()) cfg.output.dir = o.out_dir;
  if (!o.formats.empty()) cfg.output.formats = o.formats;
  return cfg;
}

bool wants(const bench::ExperimentConfig& cfg, const std::string& fmt) {
  for (const auto& f : cfg.output.formats) {
    if (f == fmt) return true;
  }
  return false;
}

std::string out_path(const bench::ExperimentConfig& cfg, const std::string& name) {
  return (fs::path(cfg.output.dir) / name).string();
}

void prepare_out_dir(const bench::ExperimentConfig& cfg) {
  std::error_code ec;
  fs::create_directories(cfg.output.dir, ec);
  if (ec) throw Error(ErrorKind::IoError, "cannot create " + cfg.output.dir + ": " + ec.message());
}

/// Writes runlog, rewards and (when means are known) regret outputs.
void emit_run_outputs(const bench::ExperimentConfig& cfg, const bench::RunLog& log) {
  const bench::EnvironmentFactory factory(cfg);
  bench::NamedRewards rewards;
  bench::NamedRegret regret;
  const auto parts = bench::split_by_policy(log);
  for (const auto& [name, part] : parts) {
    rewards.emplace_back(name, bench::reward_series(part));
    if (factory.means()) {
      const ArmId optimal = build_arm_space().find(cfg.optimal_arm);
      regret.emplace_back(name, bench::compute_regret(part, optimal, *factory.means()));
    }
  }
  if (wants(cfg, "csv")) {
    bench::write_csv_file(out_path(cfg, "runlog.csv"), [&](std::ostream& os) { bench::write_runlog(os, log); });
    bench::write_csv_file(out_path(cfg, "rewards.csv"),
                          [&](std::ostream& os) { bench::write_rewards_csv(os, rewards); });
    if (!regret.empty()) {
      bench::write_csv_file(out_path(cfg, "regret.csv"),
                            [&](std::ostream& os) { bench::write_regret_csv(os, regret); });
    }
  }
  if (wants(cfg, "svg")) {
    bench::write_text_file(out_path(cfg, "runlog.svg"), bench::runlog_svg(log));
    bench::write_text_file(out_path(cfg, "rewards.svg"), bench::rewards_svg(rewards));
    if (!regret.empty()) bench::write_text_file(out_path(cfg, "regret.svg"), bench::regret_svg(regret));
  }
  if (regret.empty()) std::cout << "no environment means available; regret not written\n";
  for (std::size_t i = 0; i < rewards.size(); ++i) {
    const auto& r = rewards[i].second.mean;
    double total = 0.0;
    for (double x : r) total += x;
    std::cout << rewards[i].first << ": mean cumulative reward " << total;
    if (!regret.empty()) std::cout << ", mean cumulative regret " << regret[i].second.cumulative_stats.mean.back();
    std::cout << '\n';
  }
}

void cmd_run(const bench::ExperimentConfig& cfg) {
  prepare_out_dir(cfg);
  emit_run_outputs(cfg, bench::run_experiment(cfg));
}

void cmd_compare(const bench::ExperimentConfig& cfg) {
  prepare_out_dir(cfg);
  emit_run_outputs(cfg, bench::run_comparison(cfg));
}

void cmd_grid(const bench::ExperimentConfig& cfg) {
  prepare_out_dir(cfg);
  const auto cells = bench::grid_search(cfg, cfg.grid, cfg.seeds.front());
  if (wants(cfg, "csv")) {
    bench::write_csv_file(out_path(cfg, "heatmap.csv"), [&](std::ostream& os) { bench::write_heatmap_csv(os, cells); });
  }
  if (wants(cfg, "svg")) bench::write_text_file(out_path(cfg, "heatmap.svg"), bench::heatmap_svg(cells));
  const auto& best = bench::best_cell(cells);
  std::cout << "best cell: eps " << best.eps << ", K " << best.k << ", mean cumulative reward "
            << best.mean_total_reward << '\n';
}

void cmd_intervene(bench::ExperimentConfig cfg) {
  if (cfg.interventions.empty()) {
    cfg.interventions.push_back({75, cfg.optimal_arm, false});
    if (cfg.rounds <= 75) cfg.rounds = 130;
    std::cout << "no intervention configured; pruning the optimal arm after round 75 of " << cfg.rounds << '\n';
  }
  bench::validate(cfg);
  prepare_out_dir(cfg);
  const auto result = bench::intervention_run(cfg);
  emit_run_outputs(cfg, result.log);
  if (wants(cfg, "csv")) {
    bench::write_csv_file(out_path(cfg, "convergence.csv"),
                          [&](std::ostream& os) { bench::write_convergence_csv(os, result.report); });
  }
  std::size_t settled = 0;
  for (const auto& row : result.report) settled += row.stable_from ? 1 : 0;
  std::cout << "settled on the best remaining arm: " << settled << " of " << result.report.size() << '\n';
}

void cmd_calibrate(const bench::ExperimentConfig& cfg, const std::string& out_file) {
  bench::CalibrationConfig cal;
  cal.seeds = cfg.calibration.seeds;
  cal.rounds_per_arm = cfg.calibration.rounds_per_arm;
  cal.settle_rounds = cfg.calibration.settle_rounds;
  const bench::EnvironmentFactory factory([&] {
    auto c = cfg;
    c.environment.kind = bench::EnvKind::Bgt;
    return c;
  }());
  cal.env = factory.bgt_config();
  const auto spec = bench::calibrate_from_model(cal, [](std::uint64_t seed, ArmId arm) {
    std::cerr << "\rseed " << seed << " arm " << arm << "   " << std::flush;
  });
  std::cerr << '\n';
  std::string path = out_file;
  if (path.empty()) {
    prepare_out_dir(cfg);
    path = out_path(cfg, "surrogate.csv");
  }
  env::save_surrogate_spec(path, spec);
  const auto best = spec.optimal_arm();
  std::cout << "wrote " << path << "; best arm " << best << " (" << spec.arms[best].params.frequency_hz << " Hz, "
            << spec.arms[best].params.amplitude << ")\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Closed-loop adaptive DBS workbench"};
  app.require_subcommand(1);
  app.fallthrough();
  Overrides o;
  app.add_option("--config", o.config, "JSON experiment config")->check(CLI::ExistingFile);
  app.add_option("--seeds", o.seeds, "seed list, e.g. 1-30 or 1,2,5");
  app.add_option("--rounds", o.rounds, "rounds per episode");
  app.add_option("--env", o.env, "surrogate or bgt");
  app.add_option("--policy", o.policy, "policy name; comma list for compare");
  app.add_option("--out-dir", o.out_dir, "output directory");
  app.add_option("--format", o.formats, "csv and/or svg (repeatable)")->check(CLI::IsMember({"csv", "svg"}));

  auto* run = app.add_subcommand("run", "run one policy");
  auto* compare = app.add_subcommand("compare", "run several policies on the same seeds");
  auto* grid = app.add_subcommand("grid", "T3P epsilon x K grid search");
  auto* intervene = app.add_subcommand("intervene", "prune an arm mid-run and report reconvergence");
  auto* calibrate = app.add_subcommand("calibrate", "build a surrogate spec from the network model");
  std::string spec_out;
  calibrate->add_option("--spec-out", spec_out, "spec file to write (default <out-dir>/surrogate.csv)");

  CLI11_PARSE(app, argc, argv);
  try {
    const auto cfg = build_config(o);
    bench::validate(cfg);
    if (run->parsed()) cmd_run(cfg);
    if (compare->parsed()) cmd_compare(cfg);
    if (grid->parsed()) cmd_grid(cfg);
    if (intervene->parsed()) cmd_intervene(cfg);
    if (calibrate->parsed()) cmd_calibrate(cfg, spec_out);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
