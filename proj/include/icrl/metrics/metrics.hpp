#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "icrl/core/episode_log.hpp"

namespace icrl::metrics {

struct MetricSeries {
  std::string label;
  std::vector<double> values;  // index 0 is episode 1
};

/// Prefix maximum. Throws std::invalid_argument on empty input.
std::vector<double> running_max_series(const std::vector<double>& values);

/// Pointwise mean across problems. Throws std::invalid_argument on an empty
/// or ragged input.
std::vector<double> aggregate_mean(const std::vector<std::vector<double>>& per_problem);

/// Pointwise sample standard deviation / sqrt(n); zero for one problem.
std::vector<double> aggregate_stderr(const std::vector<std::vector<double>>& per_problem);

/// Value plotted per episode: r* success for game24, judge reward for
/// writing, return for text-world tasks. Failed game24 episodes count 0.
double episode_metric(const EpisodeLog& log);

struct SummaryRow {
  std::string method;
  std::string task;
  int episode = 0;
  double mean = 0.0;
  double running_max_mean = 0.0;
  double stderr_value = 0.0;  // of the running max across problems
};

struct MethodCurves {
  std::string method;
  std::string task;
  std::vector<std::string> problem_ids;
  std::vector<std::vector<double>> per_problem;  // episode metrics
  MetricSeries mean;
  MetricSeries running_max_mean;
  std::vector<double> running_max_stderr;
};

/// Groups by (method, task) in order of first appearance; running max is
/// taken per problem before averaging. Throws std::invalid_argument when
/// problems of one group have different episode counts.
std::vector<MethodCurves> build_curves(const std::vector<EpisodeLog>& logs);

std::vector<SummaryRow> summarize(const std::vector<EpisodeLog>& logs);

/// method,task,episode,mean,running_max_mean,stderr
void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& rows);

struct CostRow {
  std::string method;
  std::string task;
  int episodes = 0;
  int failed = 0;
  long long calls = 0;
  long long tokens_in = 0;
  long long tokens_out = 0;
};

std::vector<CostRow> cost_ledger(const std::vector<EpisodeLog>& logs);
/// method,task,episodes,failed,calls,tokens_in,tokens_out
void write_cost_csv(std::ostream& out, const std::vector<CostRow>& rows);

/// "88 ± 0.7"
std::string format_mean_stderr(double mean, double stderr_value, int mean_decimals = 0,
                               int stderr_decimals = 1);

/// Writes logs.jsonl, summary.csv, costs.csv and, for nonempty runs, the
/// mean and running-max SVG plots into `dir` (created if absent). Throws
/// std::runtime_error on I/O failure.
void export_results(const std::vector<EpisodeLog>& logs, const std::string& dir);

struct PlotOptions {
  std::string title;
  std::string x_label = "Episode";
  std::string y_label = "Mean";
  int width = 640;
  int height = 400;
};

/// SVG 1.1 line chart, one polyline per series plus a legend. Identical
/// input gives identical bytes. Throws std::invalid_argument for zero
/// series or an empty series.
std::string render_svg(const std::vector<MetricSeries>& series, const PlotOptions& options = {});
void emit_plot(const std::vector<MetricSeries>& series, const std::string& path,
               const PlotOptions& options = {});

}  // namespace icrl::metrics
