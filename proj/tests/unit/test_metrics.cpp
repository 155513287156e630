#include <doctest.h>

#include <filesystem>
#include <sstream>

#include "icrl/metrics/metrics.hpp"
#include "support.hpp"

using namespace icrl;
using namespace icrl::metrics;

namespace {

EpisodeLog game24_log(const std::string& pid, int episode, double gt, const std::string& method = "icrl") {
  EpisodeLog log;
  log.method = method;
  log.task = "game24";
  log.problem_id = pid;
  log.episode = episode;
  log.ground_truth = gt;
  log.calls = 5;
  log.tokens_in = 100;
  log.tokens_out = 10;
  return log;
}

/// p1: 0 1 0, p2: 0 0 1.
std::vector<EpisodeLog> two_problem_fixture() {
  return {game24_log("p1", 1, 0), game24_log("p1", 2, 1), game24_log("p1", 3, 0),
          game24_log("p2", 1, 0), game24_log("p2", 2, 0), game24_log("p2", 3, 1)};
}

int count_polylines(const std::string& svg) {
  int n = 0;
  for (auto pos = svg.find("<polyline"); pos != std::string::npos; pos = svg.find("<polyline", pos + 1)) ++n;
  return n;
}

}  // namespace

TEST_SUITE("metrics") {

TEST_CASE("running max") {
  CHECK(running_max_series({1, 0, 2, 0}) == std::vector<double>{1, 1, 2, 2});
  CHECK_THROWS_AS(running_max_series({}), std::invalid_argument);
}

TEST_CASE("aggregation") {
  CHECK(aggregate_mean({{1, 2}, {3, 4}}) == std::vector<double>{2, 3});
  CHECK_THROWS_AS(aggregate_mean({{1, 2}, {3}}), std::invalid_argument);
  CHECK_THROWS_AS(aggregate_mean({}), std::invalid_argument);
  auto se = aggregate_stderr({{0, 1}, {2, 1}});
  CHECK(se[0] == doctest::Approx(1.0));  // sd sqrt(2) over sqrt(2)
  CHECK(se[1] == doctest::Approx(0.0));
  CHECK(aggregate_stderr({{5, 6}}) == std::vector<double>{0, 0});
}

TEST_CASE("episode metric per task") {
  EpisodeLog g = game24_log("p", 1, 1);
  g.total_reward = 9;
  CHECK(episode_metric(g) == 1.0);
  g.ground_truth.reset();
  CHECK(episode_metric(g) == 0.0);
  EpisodeLog w;
  w.task = "writing";
  w.total_reward = 7;
  CHECK(episode_metric(w) == 7.0);
  EpisodeLog t;
  t.task = "textworld";
  t.total_reward = 71;
  CHECK(episode_metric(t) == 71.0);
}

TEST_CASE("running max is per problem before averaging") {
  auto curves = build_curves(two_problem_fixture());
  REQUIRE(curves.size() == 1);
  CHECK(curves[0].mean.values == std::vector<double>{0, 0.5, 0.5});
  CHECK(curves[0].running_max_mean.values == std::vector<double>{0, 0.5, 1.0});
  // averaging first and then taking the max would give 0, 0.5, 0.5
  CHECK(curves[0].running_max_stderr[1] == doctest::Approx(0.5));
  CHECK(curves[0].running_max_stderr[2] == doctest::Approx(0.0));

  auto ragged = two_problem_fixture();
  ragged.pop_back();
  CHECK_THROWS_AS(build_curves(ragged), std::invalid_argument);
}

TEST_CASE("summary and cost tables") {
  auto logs = two_problem_fixture();
  logs.push_back(game24_log("p1", 1, 1, "cot"));
  logs.back().failed = true;
  std::ostringstream csv;
  write_summary_csv(csv, summarize(logs));
  CHECK(csv.str().rfind("method,task,episode,mean,running_max_mean,stderr\n"
                        "icrl,game24,1,0.0000,0.0000,0.0000\n"
                        "icrl,game24,2,0.5000,0.5000,0.5000\n",
                        0) == 0);
  std::ostringstream costs;
  write_cost_csv(costs, cost_ledger(logs));
  CHECK(costs.str() ==
        "method,task,episodes,failed,calls,tokens_in,tokens_out\n"
        "icrl,game24,6,0,30,600,60\n"
        "cot,game24,1,1,5,100,10\n");
}

TEST_CASE("mean and stderr formatting") {
  CHECK(format_mean_stderr(88.0, 0.7) == "88 \xC2\xB1 0.7");
  CHECK(format_mean_stderr(0.904, 0.0213, 2, 2) == "0.90 \xC2\xB1 0.02");
}

TEST_CASE("svg output is deterministic") {
  std::vector<MetricSeries> s = {{"icrl", {0, 0.5, 1}}, {"cot", {0.2, 0.2, 0.2}}};
  PlotOptions o{"Game of 24", "Episode", "Success", 640, 400};
  std::string a = render_svg(s, o);
  CHECK(a == render_svg(s, o));
  CHECK(a.find("<svg") != std::string::npos);
  CHECK(a.find("</svg>") != std::string::npos);
  CHECK(count_polylines(a) == 2);
  CHECK(a.find("icrl") != std::string::npos);
  CHECK_THROWS_AS(render_svg({}, o), std::invalid_argument);
  CHECK_THROWS_AS(render_svg({{"x", {}}}, o), std::invalid_argument);
}

TEST_CASE("export writes every artifact") {
  test_support::TempDir dir;
  export_results(two_problem_fixture(), dir.str());
  for (const char* f : {"logs.jsonl", "summary.csv", "costs.csv", "mean.svg", "running_max.svg"}) {
    CHECK(std::filesystem::exists(dir.file(f)));
  }
  test_support::TempDir again;
  export_results(two_problem_fixture(), again.str());
  CHECK(test_support::read_file(dir.file("mean.svg")) ==
        test_support::read_file(again.file("mean.svg")));
}

}  // TEST_SUITE
