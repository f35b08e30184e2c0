#pragma once

#include <cstdint>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "dbs/csv.hpp"
#include "dbs/error.hpp"
#include "dbs/stim.hpp"

namespace dbs::bench {

struct RunRecord {
  std::string policy;
  std::uint64_t seed = 0;
  std::size_t round = 0;  ///< 1-based
  ArmId arm = 0;
  double frequency_hz = 0.0;
  double amplitude = 0.0;
  double epsilon = 0.0;  ///< value used for this round's selection
  std::string phase;
  ArmId greedy_arm = 0;  ///< argmax Q after this round's update
  double r1 = 0.0;
  double r2 = 0.0;
  double r3 = 0.0;
  double reward = 0.0;
  double p_beta = 0.0;
  double regret = 0.0;  ///< NaN when environment means are unknown
};

/// Records are ordered by policy, then seed, then round.
struct RunLog {
  std::string fingerprint;
  std::string version;
  std::vector<RunRecord> records;
};

inline constexpr const char* kRunLogColumns =
    "policy,seed,round,arm,frequency_hz,amplitude,epsilon,phase,greedy_arm,r1,r2,r3,reward,p_beta,regret";

inline std::string to_csv_row(const RunRecord& r) {
  using csv::format_double;
  return csv::join({r.policy, std::to_string(r.seed), std::to_string(r.round), std::to_string(r.arm),
                    format_double(r.frequency_hz), format_double(r.amplitude), format_double(r.epsilon),
                    r.phase, std::to_string(r.greedy_arm), format_double(r.r1), format_double(r.r2),
                    format_double(r.r3), format_double(r.reward), format_double(r.p_beta),
                    format_double(r.regret)});
}

inline RunRecord parse_csv_row(std::string_view line) {
  const auto f = csv::split(line);
  if (f.size() != 15) throw Error(ErrorKind::ParseError, "run log row needs 15 fields");
  RunRecord r;
  r.policy = std::string(f[0]);
  r.seed = csv::parse_integer<std::uint64_t>(f[1]);
  r.round = csv::parse_integer<std::size_t>(f[2]);
  r.arm = csv::parse_integer<ArmId>(f[3]);
  r.frequency_hz = csv::parse_double(f[4]);
  r.amplitude = csv::parse_double(f[5]);
  r.epsilon = csv::parse_double(f[6]);
  r.phase = std::string(f[7]);
  r.greedy_arm = csv::parse_integer<ArmId>(f[8]);
  r.r1 = csv::parse_double(f[9]);
  r.r2 = csv::parse_double(f[10]);
  r.r3 = csv::parse_double(f[11]);
  r.reward = csv::parse_double(f[12]);
  r.p_beta = csv::parse_double(f[13]);
  r.regret = csv::parse_double(f[14]);
  return r;
}

/// Header comments carry the fingerprint and version; the body is the column
/// row plus one line per record.
inline void write_runlog(std::ostream& os, const RunLog& log) {
  os << "# fingerprint: " << log.fingerprint << '\n';
  os << "# version: " << log.version << '\n';
  os << kRunLogColumns << '\n';
  for (const auto& r : log.records) os << to_csv_row(r) << '\n';
}

inline std::string runlog_body(const RunLog& log) {
  std::string out = std::string(kRunLogColumns) + '\n';
  for (const auto& r : log.records) out += to_csv_row(r) + '\n';
  return out;
}

inline RunLog parse_runlog(std::istream& is) {
  RunLog log;
  std::string raw;
  bool have_columns = false;
  while (std::getline(is, raw)) {
    const std::string_view line = csv::strip_cr(raw);
    if (line.empty()) continue;
    if (!have_columns && line.front() == '#') {
      if (line.rfind("# fingerprint: ", 0) == 0) log.fingerprint = std::string(line.substr(15));
      if (line.rfind("# version: ", 0) == 0) log.version = std::string(line.substr(11));
      continue;
    }
    if (!have_columns) {
      if (line != kRunLogColumns) throw Error(ErrorKind::ParseError, "unexpected run log columns");
      have_columns = true;
      continue;
    }
    log.records.push_back(parse_csv_row(line));
  }
  if (!have_columns) throw Error(ErrorKind::ParseError, "run log has no column row");
  return log;
}

}  // namespace dbs::bench
