#pragma once

// Experiment configuration: a JSON document whose objects accept only the
// documented keys. Every field has a default, so "{}" is a valid config.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"

#include "dbs/env/reward.hpp"
#include "dbs/error.hpp"
#include "dbs/policy/factory.hpp"
#include "dbs/signal/beta.hpp"
#include "dbs/stim.hpp"

namespace dbs::bench {

using nlohmann::json;

inline constexpr const char* kCodeVersion = "dbs-workbench 0.1.0";

enum class EnvKind { Surrogate, Bgt };

struct EnvironmentConfig {
  EnvKind kind = EnvKind::Surrogate;
  std::string spec;  ///< surrogate spec; empty means the bundled default
  std::string condition = "pd";
  std::size_t neurons_per_region = 10;
  double warm_in_ms = 2000.0;
  std::size_t baseline_rounds = 5;
  std::string beta_path = "lfp-first";
  std::string beta_method = "bulk";
  std::size_t segment_length = signal::kDefaultSegmentLen;
  std::string model;  ///< network parameter file; empty means the bundled default
  std::string means;  ///< spec file whose reward means drive regret in network mode
};

struct Intervention {
  std::size_t round = 0;  ///< applied after this round's update
  StimParams arm;
  bool restart = false;  ///< restart T3P instead of only pruning
};

struct GridConfig {
  std::vector<double> eps{0.1, 0.2, 0.3, 0.4, 0.5, 0.6};
  std::vector<std::size_t> k{5, 10, 15, 20, 25, 30};
  std::size_t runs_per_cell = 10;
};

struct CalibrationSettings {
  std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};
  std::size_t rounds_per_arm = 3;
  std::size_t settle_rounds = 1;
};

struct OutputConfig {
  std::string dir = "results";
  std::vector<std::string> formats{"csv"};
};

struct ExperimentConfig {
  EnvironmentConfig environment;
  policy::PolicyParams policy;
  std::vector<std::string> compare{"t3p", "eps-greedy", "ucb", "bayes-ucb", "discounted-ucb", "thompson", "random"};
  std::size_t rounds = 75;
  std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  double round_length_ms = 1000.0;
  double dt_ms = kDefaultDtMs;
  double sampling_rate_hz = 100000.0;
  StimParams optimal_arm{155.0, 1000.0};
  std::vector<Intervention> interventions;
  env::RewardConfig reward;
  std::optional<double> p_beta_norm_ref;
  GridConfig grid;
  CalibrationSettings calibration;
  OutputConfig output;
  /// Worker threads for independent seeds; 0 picks the hardware count.
  std::size_t jobs = 0;
};

namespace detail {

/// Throws ConfigError if `j` is not an object or has a key outside `allowed`.
inline void expect_keys(const json& j, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) throw Error(ErrorKind::ConfigError, where + " must be an object");
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [key, value] : j.items()) {
    if (!ok.count(key)) throw Error(ErrorKind::ConfigError, "unknown key '" + key + "' in " + where);
  }
}

template <typename T>
void read(const json& j, const char* key, T& out, const std::string& where) {
  const auto it = j.find(key);
  if (it == j.end()) return;
  try {
    out = it->get<T>();
  } catch (const json::exception& e) {
    throw Error(ErrorKind::ConfigError, where + "." + key + ": " + e.what());
  }
}

inline StimParams read_arm(const json& j, const std::string& where) {
  expect_keys(j, where, {"frequency_hz", "amplitude"});
  StimParams p;
  read(j, "frequency_hz", p.frequency_hz, where);
  read(j, "amplitude", p.amplitude, where);
  return canonical(p);
}

inline json arm_json(StimParams p) { return {{"frequency_hz", p.frequency_hz}, {"amplitude", p.amplitude}}; }

}  // namespace detail

inline signal::RegionPath parse_beta_path(const std::string& s) {
  if (s == "lfp-first") return signal::RegionPath::LfpFirst;
  if (s == "per-neuron-mean") return signal::RegionPath::PerNeuronMean;
  throw Error(ErrorKind::ConfigError, "unknown beta_path '" + s + "'");
}

inline signal::BetaMethod beta_method(const EnvironmentConfig& e) {
  if (e.beta_method == "bulk") return signal::BetaMethod::bulk();
  if (e.beta_method == "chunked") return signal::BetaMethod::chunked(e.segment_length);
  throw Error(ErrorKind::ConfigError, "unknown beta_method '" + e.beta_method + "'");
}

/// Checks ranges and cross-field consistency.
inline void validate(const ExperimentConfig& c) {
  if (c.rounds < 1) throw Error(ErrorKind::ConfigError, "rounds must be at least 1");
  if (c.seeds.empty()) throw Error(ErrorKind::ConfigError, "seeds must not be empty");
  if (!(c.round_length_ms > 0.0) || !(c.dt_ms > 0.0)) {
    throw Error(ErrorKind::ConfigError, "round_length_ms and dt_ms must be positive");
  }
  if (std::abs(c.sampling_rate_hz * c.dt_ms / 1000.0 - 1.0) > 1e-9) {
    throw Error(ErrorKind::ConfigError, "sampling_rate_hz does not match dt_ms");
  }
  const ArmSpace arms = build_arm_space();
  if (!arms.contains(c.optimal_arm)) throw Error(ErrorKind::ConfigError, "optimal_arm is not a grid arm");
  for (const auto& iv : c.interventions) {
    if (iv.round < 1 || iv.round >= c.rounds) {
      throw Error(ErrorKind::ConfigError, "intervention round " + std::to_string(iv.round) +
                                              " must lie in [1, rounds)");
    }
    if (!arms.contains(iv.arm)) throw Error(ErrorKind::ConfigError, "intervention arm is not a grid arm");
  }
  if (!policy::is_known_algorithm(c.policy.algorithm)) {
    throw Error(ErrorKind::ConfigError, "unknown policy '" + c.policy.algorithm + "'");
  }
  for (const auto& name : c.compare) {
    if (!policy::is_known_algorithm(name)) throw Error(ErrorKind::ConfigError, "unknown policy '" + name + "'");
  }
  try {
    c.policy.t3p.validate(arms.size());
  } catch (const Error& e) {
    throw Error(ErrorKind::ConfigError, e.what());
  }
  if (c.environment.condition != "pd" && c.environment.condition != "healthy") {
    throw Error(ErrorKind::ConfigError, "condition must be 'pd' or 'healthy'");
  }
  parse_beta_path(c.environment.beta_path);
  beta_method(c.environment);
  if (c.environment.neurons_per_region < 1) throw Error(ErrorKind::ConfigError, "neurons_per_region must be >= 1");
  if (c.grid.eps.empty() || c.grid.k.empty()) throw Error(ErrorKind::ConfigError, "grid axes must not be empty");
  if (c.grid.runs_per_cell < 1) throw Error(ErrorKind::ConfigError, "runs_per_cell must be >= 1");
  for (double e : c.grid.eps) {
    if (!(e >= 0.0 && e <= 1.0)) throw Error(ErrorKind::ConfigError, "grid eps outside [0, 1]");
  }
  for (std::size_t k : c.grid.k) {
    if (k < 1 || k > arms.size()) throw Error(ErrorKind::ConfigError, "grid K outside [1, arms]");
  }
  if (c.calibration.seeds.empty()) throw Error(ErrorKind::ConfigError, "calibration seeds must not be empty");
  if (c.calibration.rounds_per_arm < 3) throw Error(ErrorKind::ConfigError, "calibration needs >= 3 rounds per arm");
  for (const auto& f : c.output.formats) {
    if (f != "csv" && f != "svg") throw Error(ErrorKind::ConfigError, "format must be csv or svg");
  }
  if (c.p_beta_norm_ref && !(*c.p_beta_norm_ref > 0.0)) {
    throw Error(ErrorKind::ConfigError, "p_beta_norm_ref must be positive");
  }
  if (!(c.reward.i_rms_norm_ref > 0.0)) throw Error(ErrorKind::ConfigError, "i_rms_norm_ref must be positive");
}

inline ExperimentConfig parse_config(const json& j) {
  using detail::expect_keys;
  using detail::read;
  ExperimentConfig c;
  expect_keys(j, "config",
              {"environment", "policy", "compare", "rounds", "seeds", "round_length_ms", "dt_ms",
               "sampling_rate_hz", "optimal_arm", "interventions", "reward", "grid", "calibration", "output",
               "jobs"});

  if (j.contains("environment")) {
    const auto& e = j["environment"];
    const std::string w = "environment";
    expect_keys(e, w,
                {"kind", "spec", "condition", "neurons_per_region", "warm_in_ms", "baseline_rounds", "beta_path",
                 "beta_method", "segment_length", "model", "means"});
    std::string kind = "surrogate";
    read(e, "kind", kind, w);
    if (kind == "surrogate") {
      c.environment.kind = EnvKind::Surrogate;
    } else if (kind == "bgt") {
      c.environment.kind = EnvKind::Bgt;
    } else {
      throw Error(ErrorKind::ConfigError, "environment.kind must be 'surrogate' or 'bgt'");
    }
    auto& ec = c.environment;
    read(e, "spec", ec.spec, w);
    read(e, "condition", ec.condition, w);
    read(e, "neurons_per_region", ec.neurons_per_region, w);
    read(e, "warm_in_ms", ec.warm_in_ms, w);
    read(e, "baseline_rounds", ec.baseline_rounds, w);
    read(e, "beta_path", ec.beta_path, w);
    read(e, "beta_method", ec.beta_method, w);
    read(e, "segment_length", ec.segment_length, w);
    read(e, "model", ec.model, w);
    read(e, "means", ec.means, w);
  }

  if (j.contains("policy")) {
    const auto& p = j["policy"];
    const std::string w = "policy";
    expect_keys(p, w,
                {"algorithm", "eps", "ucb_c", "bayes_ucb_c", "discounted_ucb_c", "discount", "prior_mu0",
                 "prior_sigma0_sq", "t3p"});
    auto& pc = c.policy;
    read(p, "algorithm", pc.algorithm, w);
    read(p, "eps", pc.eps, w);
    read(p, "ucb_c", pc.ucb_c, w);
    read(p, "bayes_ucb_c", pc.bayes_ucb_c, w);
    read(p, "discounted_ucb_c", pc.discounted_ucb_c, w);
    read(p, "discount", pc.discount, w);
    read(p, "prior_mu0", pc.prior.mu0, w);
    read(p, "prior_sigma0_sq", pc.prior.sigma0_sq, w);
    if (p.contains("t3p")) {
      const auto& t = p["t3p"];
      const std::string wt = "policy.t3p";
      expect_keys(t, wt,
                  {"eps_start", "eps_min", "decay_step", "k", "deviation_threshold", "deviation_patience",
                   "timer_period", "keep_estimates"});
      auto& tc = pc.t3p;
      read(t, "eps_start", tc.eps_start, wt);
      read(t, "eps_min", tc.eps_min, wt);
      read(t, "decay_step", tc.decay_step, wt);
      read(t, "k", tc.k, wt);
      read(t, "deviation_threshold", tc.deviation_threshold, wt);
      read(t, "deviation_patience", tc.deviation_patience, wt);
      read(t, "timer_period", tc.timer_period, wt);
      read(t, "keep_estimates", tc.keep_estimates, wt);
    }
  }

  read(j, "compare", c.compare, "config");
  read(j, "rounds", c.rounds, "config");
  read(j, "seeds", c.seeds, "config");
  read(j, "round_length_ms", c.round_length_ms, "config");
  read(j, "dt_ms", c.dt_ms, "config");
  read(j, "sampling_rate_hz", c.sampling_rate_hz, "config");
  read(j, "jobs", c.jobs, "config");
  if (j.contains("optimal_arm")) c.optimal_arm = detail::read_arm(j["optimal_arm"], "optimal_arm");

  if (j.contains("interventions")) {
    const auto& list = j["interventions"];
    if (!list.is_array()) throw Error(ErrorKind::ConfigError, "interventions must be an array");
    for (const auto& item : list) {
      const std::string w = "interventions[]";
      expect_keys(item, w, {"round", "arm", "restart"});
      Intervention iv;
      read(item, "round", iv.round, w);
      if (!item.contains("arm")) throw Error(ErrorKind::ConfigError, "intervention needs an arm");
      iv.arm = detail::read_arm(item["arm"], w + ".arm");
      read(item, "restart", iv.restart, w);
      c.interventions.push_back(iv);
    }
  }

  if (j.contains("reward")) {
    const auto& r = j["reward"];
    const std::string w = "reward";
    expect_keys(r, w, {"alpha", "beta", "gamma", "i_rms_norm_ref", "p_beta_norm_ref"});
    read(r, "alpha", c.reward.alpha, w);
    read(r, "beta", c.reward.beta, w);
    read(r, "gamma", c.reward.gamma, w);
    read(r, "i_rms_norm_ref", c.reward.i_rms_norm_ref, w);
    if (r.contains("p_beta_norm_ref")) {
      double v = 0.0;
      read(r, "p_beta_norm_ref", v, w);
      c.p_beta_norm_ref = v;
    }
  }

  if (j.contains("grid")) {
    const auto& g = j["grid"];
    expect_keys(g, "grid", {"eps", "k", "runs_per_cell"});
    read(g, "eps", c.grid.eps, "grid");
    read(g, "k", c.grid.k, "grid");
    read(g, "runs_per_cell", c.grid.runs_per_cell, "grid");
  }

  if (j.contains("calibration")) {
    const auto& g = j["calibration"];
    expect_keys(g, "calibration", {"seeds", "rounds_per_arm", "settle_rounds"});
    read(g, "seeds", c.calibration.seeds, "calibration");
    read(g, "rounds_per_arm", c.calibration.rounds_per_arm, "calibration");
    read(g, "settle_rounds", c.calibration.settle_rounds, "calibration");
  }

  if (j.contains("output")) {
    const auto& o = j["output"];
    expect_keys(o, "output", {"dir", "formats"});
    read(o, "dir", c.output.dir, "output");
    read(o, "formats", c.output.formats, "output");
  }

  validate(c);
  return c;
}

inline ExperimentConfig parse_config_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::ConfigError, std::string("malformed config: ") + e.what());
  }
  return parse_config(j);
}

inline ExperimentConfig load_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw Error(ErrorKind::IoError, "cannot open " + path);
  std::string text((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
  return parse_config_text(text);
}

/// Every field, defaults included, in the same shape parse_config accepts.
inline json to_json(const ExperimentConfig& c) {
  const auto& e = c.environment;
  const auto& p = c.policy;
  const auto& t = p.t3p;
  json iv = json::array();
  for (const auto& x : c.interventions) {
    iv.push_back({{"round", x.round}, {"arm", detail::arm_json(x.arm)}, {"restart", x.restart}});
  }
  json reward = {{"alpha", c.reward.alpha},
                 {"beta", c.reward.beta},
                 {"gamma", c.reward.gamma},
                 {"i_rms_norm_ref", c.reward.i_rms_norm_ref}};
  if (c.p_beta_norm_ref) reward["p_beta_norm_ref"] = *c.p_beta_norm_ref;
  return {
      {"environment",
       {{"kind", e.kind == EnvKind::Surrogate ? "surrogate" : "bgt"},
        {"spec", e.spec},
        {"condition", e.condition},
        {"neurons_per_region", e.neurons_per_region},
        {"warm_in_ms", e.warm_in_ms},
        {"baseline_rounds", e.baseline_rounds},
        {"beta_path", e.beta_path},
        {"beta_method", e.beta_method},
        {"segment_length", e.segment_length},
        {"model", e.model},
        {"means", e.means}}},
      {"policy",
       {{"algorithm", p.algorithm},
        {"eps", p.eps},
        {"ucb_c", p.ucb_c},
        {"bayes_ucb_c", p.bayes_ucb_c},
        {"discounted_ucb_c", p.discounted_ucb_c},
        {"discount", p.discount},
        {"prior_mu0", p.prior.mu0},
        {"prior_sigma0_sq", p.prior.sigma0_sq},
        {"t3p",
         {{"eps_start", t.eps_start},
          {"eps_min", t.eps_min},
          {"decay_step", t.decay_step},
          {"k", t.k},
          {"deviation_threshold", t.deviation_threshold},
          {"deviation_patience", t.deviation_patience},
          {"timer_period", t.timer_period},
          {"keep_estimates", t.keep_estimates}}}}},
      {"compare", c.compare},
      {"rounds", c.rounds},
      {"seeds", c.seeds},
      {"round_length_ms", c.round_length_ms},
      {"dt_ms", c.dt_ms},
      {"sampling_rate_hz", c.sampling_rate_hz},
      {"optimal_arm", detail::arm_json(c.optimal_arm)},
      {"interventions", iv},
      {"reward", reward},
      {"grid", {{"eps", c.grid.eps}, {"k", c.grid.k}, {"runs_per_cell", c.grid.runs_per_cell}}},
      {"calibration",
       {{"seeds", c.calibration.seeds},
        {"rounds_per_arm", c.calibration.rounds_per_arm},
        {"settle_rounds", c.calibration.settle_rounds}}},
      {"output", {{"dir", c.output.dir}, {"formats", c.output.formats}}},
      {"jobs", c.jobs},
  };
}

/// FNV-1a over the canonical (sorted-key, compact) dump, as 16 hex digits.
/// Thread count and output settings do not change results and are left out.
inline std::string fingerprint(const ExperimentConfig& c) {
  json j = to_json(c);
  j.erase("jobs");
  j.erase("output");
  const std::string text = j.dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace dbs::bench
