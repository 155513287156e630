#include "icrl/metrics/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <stdexcept>

namespace icrl::metrics {

namespace {

std::string fixed(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  std::string s = buf;
  if (s.find_first_not_of("-0.") == std::string::npos && s.front() == '-') s.erase(0, 1);
  return s;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

void check_written(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string xml_escape(const std::string& s) {
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

}  // namespace

std::vector<double> running_max_series(const std::vector<double>& values) {
  if (values.empty()) throw std::invalid_argument("running max of an empty series");
  std::vector<double> out(values.size());
  double best = values.front();
  for (std::size_t i = 0; i < values.size(); ++i) {
    best = std::max(best, values[i]);
    out[i] = best;
  }
  return out;
}

std::vector<double> aggregate_mean(const std::vector<std::vector<double>>& per_problem) {
  if (per_problem.empty()) throw std::invalid_argument("mean over zero series");
  const std::size_t n = per_problem.front().size();
  std::vector<double> sum(n, 0.0);
  for (const auto& s : per_problem) {
    if (s.size() != n) {
      throw std::invalid_argument("ragged series: lengths " + std::to_string(n) + " and " +
                                  std::to_string(s.size()));
    }
    for (std::size_t i = 0; i < n; ++i) sum[i] += s[i];
  }
  for (auto& v : sum) v /= static_cast<double>(per_problem.size());
  return sum;
}

std::vector<double> aggregate_stderr(const std::vector<std::vector<double>>& per_problem) {
  std::vector<double> mean = aggregate_mean(per_problem);
  const std::size_t count = per_problem.size();
  std::vector<double> out(mean.size(), 0.0);
  if (count < 2) return out;
  for (std::size_t i = 0; i < mean.size(); ++i) {
    double ss = 0.0;
    for (const auto& s : per_problem) ss += (s[i] - mean[i]) * (s[i] - mean[i]);
    out[i] = std::sqrt(ss / static_cast<double>(count - 1)) / std::sqrt(static_cast<double>(count));
  }
  return out;
}

double episode_metric(const EpisodeLog& log) {
  if (log.task == "game24") return log.ground_truth.value_or(0.0);
  return log.total_reward;
}

std::vector<MethodCurves> build_curves(const std::vector<EpisodeLog>& logs) {
  std::vector<MethodCurves> groups;
  std::vector<std::map<std::string, std::map<int, double>>> by_problem;

  for (const auto& log : logs) {
    auto it = std::find_if(groups.begin(), groups.end(), [&](const MethodCurves& g) {
      return g.method == log.method && g.task == log.task;
    });
    if (it == groups.end()) {
      groups.push_back({log.method, log.task, {}, {}, {}, {}, {}});
      by_problem.emplace_back();
      it = groups.end() - 1;
    }
    const std::size_t g = static_cast<std::size_t>(it - groups.begin());
    if (!by_problem[g].count(log.problem_id)) it->problem_ids.push_back(log.problem_id);
    by_problem[g][log.problem_id][log.episode] = episode_metric(log);
  }

  for (std::size_t g = 0; g < groups.size(); ++g) {
    MethodCurves& c = groups[g];
    std::vector<std::vector<double>> running;
    for (const auto& id : c.problem_ids) {
      std::vector<double> series;
      for (const auto& [episode, value] : by_problem[g][id]) series.push_back(value);
      running.push_back(running_max_series(series));
      c.per_problem.push_back(std::move(series));
    }
    const std::string label = c.method + " (" + c.task + ")";
    c.mean = {label, aggregate_mean(c.per_problem)};
    c.running_max_mean = {label + " running max", aggregate_mean(running)};
    c.running_max_stderr = aggregate_stderr(running);
  }
  return groups;
}

std::vector<SummaryRow> summarize(const std::vector<EpisodeLog>& logs) {
  std::vector<SummaryRow> rows;
  for (const auto& c : build_curves(logs)) {
    for (std::size_t i = 0; i < c.mean.values.size(); ++i) {
      rows.push_back({c.method, c.task, static_cast<int>(i + 1), c.mean.values[i],
                      c.running_max_mean.values[i], c.running_max_stderr[i]});
    }
  }
  return rows;
}

void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& rows) {
  out << "method,task,episode,mean,running_max_mean,stderr\n";
  for (const auto& r : rows) {
    out << csv_field(r.method) << ',' << csv_field(r.task) << ',' << r.episode << ','
        << fixed(r.mean, 4) << ',' << fixed(r.running_max_mean, 4) << ','
        << fixed(r.stderr_value, 4) << '\n';
  }
}

std::vector<CostRow> cost_ledger(const std::vector<EpisodeLog>& logs) {
  std::vector<CostRow> rows;
  for (const auto& log : logs) {
    auto it = std::find_if(rows.begin(), rows.end(), [&](const CostRow& r) {
      return r.method == log.method && r.task == log.task;
    });
    if (it == rows.end()) {
      rows.push_back({log.method, log.task});
      it = rows.end() - 1;
    }
    it->episodes += 1;
    it->failed += log.failed ? 1 : 0;
    it->calls += log.calls;
    it->tokens_in += log.tokens_in;
    it->tokens_out += log.tokens_out;
  }
  return rows;
}

void write_cost_csv(std::ostream& out, const std::vector<CostRow>& rows) {
  out << "method,task,episodes,failed,calls,tokens_in,tokens_out\n";
  for (const auto& r : rows) {
    out << csv_field(r.method) << ',' << csv_field(r.task) << ',' << r.episodes << ',' << r.failed
        << ',' << r.calls << ',' << r.tokens_in << ',' << r.tokens_out << '\n';
  }
}

std::string format_mean_stderr(double mean, double stderr_value, int mean_decimals,
                               int stderr_decimals) {
  return fixed(mean, mean_decimals) + " \xC2\xB1 " + fixed(stderr_value, stderr_decimals);
}

void export_results(const std::vector<EpisodeLog>& logs, const std::string& dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create " + dir + ": " + ec.message());

  const fs::path base(dir);
  {
    auto path = base / "logs.jsonl";
    auto out = open_out(path);
    write_jsonl(out, logs);
    check_written(out, path);
  }
  {
    auto path = base / "summary.csv";
    auto out = open_out(path);
    write_summary_csv(out, summarize(logs));
    check_written(out, path);
  }
  {
    auto path = base / "costs.csv";
    auto out = open_out(path);
    write_cost_csv(out, cost_ledger(logs));
    check_written(out, path);
  }
  auto curves = build_curves(logs);
  if (curves.empty()) return;
  std::vector<MetricSeries> means;
  std::vector<MetricSeries> running;
  for (const auto& c : curves) {
    means.push_back(c.mean);
    running.push_back(c.running_max_mean);
  }
  emit_plot(means, (base / "mean.svg").string(), {"Mean per episode", "Episode", "Mean"});
  emit_plot(running, (base / "running_max.svg").string(),
            {"Mean of running max", "Episode", "Running max"});
}

std::string render_svg(const std::vector<MetricSeries>& series, const PlotOptions& o) {
  if (series.empty()) throw std::invalid_argument("plot needs at least one series");
  static const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                  "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};
  std::size_t max_len = 0;
  double lo = 0.0;
  double hi = 1.0;
  bool first = true;
  for (const auto& s : series) {
    if (s.values.empty()) throw std::invalid_argument("series '" + s.label + "' is empty");
    max_len = std::max(max_len, s.values.size());
    for (double v : s.values) {
      if (first) {
        lo = std::min(0.0, v);
        hi = v;
        first = false;
      }
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  if (hi <= lo) hi = lo + 1.0;

  const double left = 60, right = 20, top = 40, bottom = 60;
  const double legend_h = 18.0 * static_cast<double>(series.size());
  const double plot_w = o.width - left - right;
  const double plot_h = o.height - top - bottom - legend_h;
  auto px = [&](std::size_t i) {
    return max_len <= 1 ? left + plot_w / 2 : left + plot_w * static_cast<double>(i) / (max_len - 1);
  };
  auto py = [&](double v) { return top + plot_h * (1.0 - (v - lo) / (hi - lo)); };

  std::string svg;
  svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" +
         std::to_string(o.width) + "\" height=\"" + std::to_string(o.height) + "\">\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (!o.title.empty()) {
    svg += "<text x=\"" + fixed(o.width / 2.0, 1) + "\" y=\"22\" text-anchor=\"middle\" "
           "font-family=\"sans-serif\" font-size=\"15\">" + xml_escape(o.title) + "</text>\n";
  }
  // axes
  svg += "<line x1=\"" + fixed(left, 1) + "\" y1=\"" + fixed(top + plot_h, 1) + "\" x2=\"" +
         fixed(left + plot_w, 1) + "\" y2=\"" + fixed(top + plot_h, 1) + "\" stroke=\"black\"/>\n";
  svg += "<line x1=\"" + fixed(left, 1) + "\" y1=\"" + fixed(top, 1) + "\" x2=\"" + fixed(left, 1) +
         "\" y2=\"" + fixed(top + plot_h, 1) + "\" stroke=\"black\"/>\n";
  for (int t = 0; t <= 4; ++t) {
    double v = lo + (hi - lo) * t / 4.0;
    svg += "<text x=\"" + fixed(left - 6, 1) + "\" y=\"" + fixed(py(v) + 4, 1) +
           "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" + fixed(v, 2) +
           "</text>\n";
  }
  svg += "<text x=\"" + fixed(left, 1) + "\" y=\"" + fixed(top + plot_h + 16, 1) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">1</text>\n";
  svg += "<text x=\"" + fixed(left + plot_w, 1) + "\" y=\"" + fixed(top + plot_h + 16, 1) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" +
         std::to_string(max_len) + "</text>\n";
  svg += "<text x=\"" + fixed(left + plot_w / 2, 1) + "\" y=\"" + fixed(top + plot_h + 34, 1) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" +
         xml_escape(o.x_label) + "</text>\n";
  svg += "<text x=\"16\" y=\"" + fixed(top + plot_h / 2, 1) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" transform=\"rotate(-90 16 " +
         fixed(top + plot_h / 2, 1) + ")\">" + xml_escape(o.y_label) + "</text>\n";

  for (std::size_t s = 0; s < series.size(); ++s) {
    const char* color = kColors[s % (sizeof kColors / sizeof *kColors)];
    std::string points;
    for (std::size_t i = 0; i < series[s].values.size(); ++i) {
      if (i) points += ' ';
      points += fixed(px(i), 2) + "," + fixed(py(series[s].values[i]), 2);
    }
    svg += "<polyline fill=\"none\" stroke=\"" + std::string(color) +
           "\" stroke-width=\"2\" points=\"" + points + "\"/>\n";
    const double ly_clamped = top + plot_h + 56 + 18.0 * static_cast<double>(s);
    svg += "<line x1=\"" + fixed(left, 1) + "\" y1=\"" + fixed(ly_clamped - 4, 1) + "\" x2=\"" +
           fixed(left + 24, 1) + "\" y2=\"" + fixed(ly_clamped - 4, 1) + "\" stroke=\"" + color +
           "\" stroke-width=\"2\"/>\n";
    svg += "<text x=\"" + fixed(left + 30, 1) + "\" y=\"" + fixed(ly_clamped, 1) +
           "\" font-family=\"sans-serif\" font-size=\"11\">" + xml_escape(series[s].label) +
           "</text>\n";
  }
  svg += "</svg>\n";
  return svg;
}

void emit_plot(const std::vector<MetricSeries>& series, const std::string& path,
               const PlotOptions& options) {
  std::string svg = render_svg(series, options);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << svg;
  out.flush();
  if (!out) throw std::runtime_error("write failed for " + path);
}

}  // namespace icrl::metrics
