#pragma once

// Fast stand-in for the network: each arm returns Gaussian reward and beta
// power draws with calibrated means and spreads.

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "dbs/csv.hpp"
#include "dbs/env/environment.hpp"
#include "dbs/error.hpp"

namespace dbs::env {

struct ArmStats {
  ArmId arm = 0;
  StimParams params;
  double reward_mean = 0.0;
  double reward_std = 0.0;
  double pbeta_mean = 0.0;
  double pbeta_std = 0.0;

  friend bool operator==(const ArmStats&, const ArmStats&) = default;
};

inline constexpr const char* kSurrogateColumns =
    "arm,frequency_hz,amplitude,reward_mean,reward_std,pbeta_mean,pbeta_std";

struct SurrogateSpec {
  std::vector<ArmStats> arms;
  /// Free-form "key: value" provenance carried in the file header.
  std::vector<std::pair<std::string, std::string>> provenance;

  std::vector<double> reward_means() const {
    std::vector<double> out;
    out.reserve(arms.size());
    for (const auto& a : arms) out.push_back(a.reward_mean);
    return out;
  }

  ArmId optimal_arm() const {
    ArmId best = 0;
    for (ArmId i = 1; i < arms.size(); ++i) {
      if (arms[i].reward_mean > arms[best].reward_mean) best = i;
    }
    return best;
  }

  ArmSpace arm_space() const {
    std::vector<StimParams> p;
    p.reserve(arms.size());
    for (const auto& a : arms) p.push_back(a.params);
    return ArmSpace(std::move(p));
  }

  /// Throws ParseError unless ids run 0..n-1, spreads are non-negative, and a
  /// single arm holds the strictly highest mean reward.
  void validate() const {
    if (arms.empty()) throw Error(ErrorKind::ParseError, "surrogate spec has no arms");
    for (ArmId i = 0; i < arms.size(); ++i) {
      const auto& a = arms[i];
      if (a.arm != i) throw Error(ErrorKind::ParseError, "arm ids must run 0..n-1 in order");
      if (!std::isfinite(a.reward_mean) || !std::isfinite(a.pbeta_mean) ||
          !(a.reward_std >= 0.0) || !(a.pbeta_std >= 0.0)) {
        throw Error(ErrorKind::ParseError, "bad statistics for arm " + std::to_string(i));
      }
    }
    const ArmId best = optimal_arm();
    for (ArmId i = 0; i < arms.size(); ++i) {
      if (i != best && arms[i].reward_mean == arms[best].reward_mean) {
        throw Error(ErrorKind::ParseError, "arms " + std::to_string(best) + " and " +
                                               std::to_string(i) + " tie for the best mean reward");
      }
    }
  }

  friend bool operator==(const SurrogateSpec&, const SurrogateSpec&) = default;
};

inline void write_surrogate_spec(std::ostream& os, const SurrogateSpec& spec) {
  for (const auto& [k, v] : spec.provenance) os << "# " << k << ": " << v << '\n';
  os << kSurrogateColumns << '\n';
  for (const auto& a : spec.arms) {
    os << csv::join({std::to_string(a.arm), csv::format_double(a.params.frequency_hz),
                     csv::format_double(a.params.amplitude), csv::format_double(a.reward_mean),
                     csv::format_double(a.reward_std), csv::format_double(a.pbeta_mean),
                     csv::format_double(a.pbeta_std)})
       << '\n';
  }
}

inline void save_surrogate_spec(const std::string& path, const SurrogateSpec& spec) {
  std::ofstream os(path);
  if (!os) throw Error(ErrorKind::IoError, "cannot write " + path);
  write_surrogate_spec(os, spec);
  if (!os) throw Error(ErrorKind::IoError, "write failed for " + path);
}

inline SurrogateSpec parse_surrogate_spec(std::istream& is) {
  SurrogateSpec spec;
  std::string raw;
  bool have_columns = false;
  std::size_t line_no = 0;
  while (std::getline(is, raw)) {
    ++line_no;
    const std::string_view line = csv::strip_cr(raw);
    if (line.empty()) continue;
    if (line.front() == '#') {
      if (have_columns) throw Error(ErrorKind::ParseError, "header comment after column row");
      std::string_view body = line.substr(1);
      while (!body.empty() && body.front() == ' ') body.remove_prefix(1);
      const auto colon = body.find(": ");
      if (colon == std::string_view::npos) {
        spec.provenance.emplace_back(std::string(body), "");
      } else {
        spec.provenance.emplace_back(std::string(body.substr(0, colon)),
                                     std::string(body.substr(colon + 2)));
      }
      continue;
    }
    if (!have_columns) {
      if (line != kSurrogateColumns) {
        throw Error(ErrorKind::ParseError, "unexpected column row '" + std::string(line) + "'");
      }
      have_columns = true;
      continue;
    }
    const auto f = csv::split(line);
    if (f.size() != 7) {
      throw Error(ErrorKind::ParseError, "line " + std::to_string(line_no) + ": expected 7 fields");
    }
    ArmStats a;
    a.arm = csv::parse_integer<ArmId>(f[0]);
    a.params = canonical({csv::parse_double(f[1]), csv::parse_double(f[2])});
    a.reward_mean = csv::parse_double(f[3]);
    a.reward_std = csv::parse_double(f[4]);
    a.pbeta_mean = csv::parse_double(f[5]);
    a.pbeta_std = csv::parse_double(f[6]);
    spec.arms.push_back(a);
  }
  if (!have_columns) throw Error(ErrorKind::ParseError, "missing column row");
  spec.validate();
  return spec;
}

inline SurrogateSpec load_surrogate_spec(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw Error(ErrorKind::IoError, "cannot open " + path);
  return parse_surrogate_spec(is);
}

inline std::string default_surrogate_path() {
  return std::string(DBS_DATA_DIR) + "/default_surrogate.csv";
}

class SurrogateEnv final : public Environment {
 public:
  SurrogateEnv(SurrogateSpec spec, std::uint64_t seed)
      : spec_(std::move(spec)), arms_(spec_.arm_space()), rng_(seed) {
    spec_.validate();
  }

  /// Draws reward, then beta power, each from its own standard normal; beta
  /// power is floored at zero.
  RoundResult play(ArmId arm) override {
    if (arm >= spec_.arms.size()) {
      throw Error(ErrorKind::UnknownArm, "arm id " + std::to_string(arm) + " out of range");
    }
    const ArmStats& s = spec_.arms[arm];
    const double z_reward = gauss_(rng_);
    const double z_pbeta = gauss_(rng_);
    RoundResult out;
    out.arm = arm;
    out.reward.r1 = out.reward.r2 = out.reward.r3 = std::nan("");
    out.reward.total = s.reward_mean + s.reward_std * z_reward;
    out.p_beta.value = std::max(0.0, s.pbeta_mean + s.pbeta_std * z_pbeta);
    return out;
  }

  const ArmSpace& arms() const override { return arms_; }
  const SurrogateSpec& spec() const noexcept { return spec_; }

 private:
  SurrogateSpec spec_;
  ArmSpace arms_;
  std::mt19937_64 rng_;
  std::normal_distribution<double> gauss_{0.0, 1.0};
};

}  // namespace dbs::env
