#pragma once

// CSV tables and static SVG charts for experiment outputs.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "dbs/bench/experiment.hpp"
#include "dbs/bench/runlog.hpp"
#include "dbs/csv.hpp"
#include "dbs/error.hpp"

namespace dbs::bench {

using NamedRewards = std::vector<std::pair<std::string, SeriesStats>>;
using NamedRegret = std::vector<std::pair<std::string, RegretSeries>>;

inline constexpr const char* kRewardColumns = "policy,round,reward_mean,reward_std";
inline constexpr const char* kRegretColumns =
    "policy,round,instantaneous_mean,instantaneous_std,cumulative_mean,cumulative_std";
inline constexpr const char* kHeatmapColumns = "eps,k,mean_total_reward,std_total_reward";
inline constexpr const char* kConvergenceColumns = "seed,event_round,pruned_arm,target_arm,stable_from";

inline void write_rewards_csv(std::ostream& os, const NamedRewards& series) {
  os << kRewardColumns << '\n';
  for (const auto& [name, s] : series) {
    for (std::size_t t = 0; t < s.mean.size(); ++t) {
      os << csv::join({name, std::to_string(t + 1), csv::format_double(s.mean[t]), csv::format_double(s.std[t])})
         << '\n';
    }
  }
}

inline void write_regret_csv(std::ostream& os, const NamedRegret& series) {
  os << kRegretColumns << '\n';
  for (const auto& [name, r] : series) {
    const auto& i = r.instantaneous_stats;
    const auto& c = r.cumulative_stats;
    for (std::size_t t = 0; t < i.mean.size(); ++t) {
      os << csv::join({name, std::to_string(t + 1), csv::format_double(i.mean[t]), csv::format_double(i.std[t]),
                       csv::format_double(c.mean[t]), csv::format_double(c.std[t])})
         << '\n';
    }
  }
}

inline void write_heatmap_csv(std::ostream& os, const std::vector<GridCell>& cells) {
  os << kHeatmapColumns << '\n';
  for (const auto& c : cells) {
    os << csv::join({csv::format_double(c.eps), std::to_string(c.k), csv::format_double(c.mean_total_reward),
                     csv::format_double(c.std_total_reward)})
       << '\n';
  }
}

inline void write_convergence_csv(std::ostream& os, const std::vector<ConvergenceRow>& rows) {
  os << kConvergenceColumns << '\n';
  for (const auto& r : rows) {
    os << csv::join({std::to_string(r.seed), std::to_string(r.event_round), std::to_string(r.pruned_arm),
                     std::to_string(r.target_arm), r.stable_from ? std::to_string(*r.stable_from) : ""})
       << '\n';
  }
}

namespace svg {

inline std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", x);
  return buf;
}

inline std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

inline std::string tick_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

inline constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                           "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};

struct Line {
  std::string name;
  std::vector<double> y;  ///< y[i] plotted at x = i + 1
};

/// Line chart with labeled axes and a legend.
inline std::string line_chart(const std::string& title, const std::string& x_label, const std::string& y_label,
                              const std::vector<Line>& lines) {
  const double w = 720, h = 440, left = 80, right = 170, top = 40, bottom = 60;
  const double pw = w - left - right, ph = h - top - bottom;
  std::size_t n = 1;
  double lo = 0.0, hi = 0.0;
  bool any = false;
  for (const auto& l : lines) {
    n = std::max(n, l.y.size());
    for (double v : l.y) {
      if (!std::isfinite(v)) continue;
      lo = any ? std::min(lo, v) : v;
      hi = any ? std::max(hi, v) : v;
      any = true;
    }
  }
  if (!any || hi == lo) {
    lo -= 1.0;
    hi += 1.0;
  }
  const auto sx = [&](double x) { return left + (n > 1 ? (x - 1.0) / static_cast<double>(n - 1) : 0.5) * pw; };
  const auto sy = [&](double y) { return top + (hi - y) / (hi - lo) * ph; };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h
     << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << num(left + pw / 2) << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">"
     << escape(title) << "</text>\n";
  os << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw << "\" height=\"" << ph
     << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 5; ++i) {
    const double v = lo + (hi - lo) * i / 5.0;
    os << "<line x1=\"" << left - 4 << "\" x2=\"" << left << "\" y1=\"" << num(sy(v)) << "\" y2=\"" << num(sy(v))
       << "\" stroke=\"black\"/><text x=\"" << left - 8 << "\" y=\"" << num(sy(v) + 4)
       << "\" text-anchor=\"end\">" << tick_label(v) << "</text>\n";
    const double x = 1.0 + (static_cast<double>(n) - 1.0) * i / 5.0;
    os << "<line x1=\"" << num(sx(x)) << "\" x2=\"" << num(sx(x)) << "\" y1=\"" << top + ph << "\" y2=\""
       << top + ph + 4 << "\" stroke=\"black\"/><text x=\"" << num(sx(x)) << "\" y=\"" << top + ph + 18
       << "\" text-anchor=\"middle\">" << tick_label(std::round(x)) << "</text>\n";
  }
  os << "<text x=\"" << num(left + pw / 2) << "\" y=\"" << h - 15 << "\" text-anchor=\"middle\">"
     << escape(x_label) << "</text>\n";
  os << "<text x=\"18\" y=\"" << num(top + ph / 2) << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
     << num(top + ph / 2) << ")\">" << escape(y_label) << "</text>\n";
  for (std::size_t li = 0; li < lines.size(); ++li) {
    const char* color = kPalette[li % std::size(kPalette)];
    std::string pts;
    for (std::size_t i = 0; i < lines[li].y.size(); ++i) {
      if (!std::isfinite(lines[li].y[i])) continue;
      pts += num(sx(static_cast<double>(i + 1))) + "," + num(sy(lines[li].y[i])) + " ";
    }
    os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"" << pts << "\"/>\n";
    const double ly = top + 10 + 18.0 * static_cast<double>(li);
    os << "<line x1=\"" << left + pw + 12 << "\" x2=\"" << left + pw + 32 << "\" y1=\"" << ly << "\" y2=\"" << ly
       << "\" stroke=\"" << color << "\" stroke-width=\"2\"/><text x=\"" << left + pw + 38 << "\" y=\""
       << ly + 4 << "\">" << escape(lines[li].name) << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

/// Grid heatmap: eps on the vertical axis, K on the horizontal axis.
inline std::string heatmap(const std::string& title, const std::vector<GridCell>& cells) {
  std::vector<double> eps, ks;
  for (const auto& c : cells) {
    if (std::find(eps.begin(), eps.end(), c.eps) == eps.end()) eps.push_back(c.eps);
    if (std::find(ks.begin(), ks.end(), static_cast<double>(c.k)) == ks.end()) ks.push_back(static_cast<double>(c.k));
  }
  std::sort(eps.begin(), eps.end());
  std::sort(ks.begin(), ks.end());
  double lo = 0.0, hi = 1.0;
  if (!cells.empty()) {
    lo = hi = cells.front().mean_total_reward;
    for (const auto& c : cells) {
      lo = std::min(lo, c.mean_total_reward);
      hi = std::max(hi, c.mean_total_reward);
    }
  }
  const double cell = 70, left = 80, top = 50;
  const double w = left + cell * static_cast<double>(ks.size()) + 40;
  const double h = top + cell * static_cast<double>(eps.size()) + 60;
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h
     << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << num(w / 2) << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">" << escape(title)
     << "</text>\n";
  for (const auto& c : cells) {
    const auto col = std::find(ks.begin(), ks.end(), static_cast<double>(c.k)) - ks.begin();
    const auto row = std::find(eps.begin(), eps.end(), c.eps) - eps.begin();
    const double f = hi > lo ? (c.mean_total_reward - lo) / (hi - lo) : 0.5;
    const int red = static_cast<int>(255 * (1.0 - f));
    const int green = static_cast<int>(90 + 140 * f);
    const int blue = static_cast<int>(255 * (1.0 - f) * 0.6 + 60);
    const double x = left + cell * static_cast<double>(col);
    const double y = top + cell * static_cast<double>(row);
    os << "<rect x=\"" << x << "\" y=\"" << y << "\" width=\"" << cell << "\" height=\"" << cell
       << "\" fill=\"rgb(" << red << "," << green << "," << blue << ")\" stroke=\"white\"/>";
    os << "<text x=\"" << x + cell / 2 << "\" y=\"" << y + cell / 2 + 4 << "\" text-anchor=\"middle\">"
       << tick_label(c.mean_total_reward) << "</text>\n";
  }
  for (std::size_t i = 0; i < ks.size(); ++i) {
    os << "<text x=\"" << left + cell * (static_cast<double>(i) + 0.5) << "\" y=\""
       << top + cell * static_cast<double>(eps.size()) + 18 << "\" text-anchor=\"middle\">" << tick_label(ks[i])
       << "</text>\n";
  }
  for (std::size_t i = 0; i < eps.size(); ++i) {
    os << "<text x=\"" << left - 8 << "\" y=\"" << top + cell * (static_cast<double>(i) + 0.5) + 4
       << "\" text-anchor=\"end\">" << tick_label(eps[i]) << "</text>\n";
  }
  os << "<text x=\"" << left + cell * static_cast<double>(ks.size()) / 2 << "\" y=\"" << h - 12
     << "\" text-anchor=\"middle\">K (arms kept after warm-up)</text>\n";
  os << "<text x=\"20\" y=\"" << top + cell * static_cast<double>(eps.size()) / 2
     << "\" text-anchor=\"middle\" transform=\"rotate(-90 20 " << top + cell * static_cast<double>(eps.size()) / 2
     << ")\">initial epsilon</text>\n";
  os << "</svg>\n";
  return os.str();
}

}  // namespace svg

inline std::string rewards_svg(const NamedRewards& series) {
  std::vector<svg::Line> lines;
  for (const auto& [name, s] : series) lines.push_back({name, s.mean});
  return svg::line_chart("Mean instantaneous reward", "round", "mean instantaneous reward", lines);
}

inline std::string regret_svg(const NamedRegret& series) {
  std::vector<svg::Line> lines;
  for (const auto& [name, r] : series) lines.push_back({name, r.cumulative_stats.mean});
  return svg::line_chart("Cumulative regret", "round", "mean cumulative regret", lines);
}

inline std::string runlog_svg(const RunLog& log) {
  std::vector<svg::Line> lines;
  for (const auto& [name, part] : split_by_policy(log)) {
    const auto rows = detail::by_seed(part, [](const RunRecord& r) { return r.p_beta; }).second;
    lines.push_back({name, detail::across_seeds(rows).mean});
  }
  return svg::line_chart("Beta power per round", "round", "mean beta power", lines);
}

inline std::string heatmap_svg(const std::vector<GridCell>& cells) {
  return svg::heatmap("Mean cumulative reward", cells);
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error(ErrorKind::IoError, "cannot write " + path);
  os << text;
  if (!os) throw Error(ErrorKind::IoError, "write failed for " + path);
}

template <typename Writer>
void write_csv_file(const std::string& path, Writer&& writer) {
  std::ostringstream os;
  writer(os);
  write_text_file(path, os.str());
}

}  // namespace dbs::bench
