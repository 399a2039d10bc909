#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

#include "doctest.h"
#include "rotting/config.hpp"
#include "rotting/experiment.hpp"
#include "rotting/plot.hpp"
#include "rotting/results_io.hpp"

using namespace rotting;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("rotting_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

ExperimentConfig small_config() {
  ExperimentConfig c;
  c.name = "small";
  c.instance.family = "two_arm";
  c.instance.L = 1.0;
  c.policies = {{"fewa", "", {}}, {"wswa", "wSWA(0.2)", {{"alpha", 0.2}}}};
  c.horizon = 200;
  c.runs = 4;
  c.seed = 11;
  c.checkpoints = {10, 50, 200};
  c.threads = 2;
  return c;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("two-arm family") {
  const auto inst = build_two_arm(4.24, 10000);
  CHECK(inst.arms() == 2);
  CHECK(inst.mean_at(0, 0) == 0.0);
  CHECK(inst.mean_at(0, 9999) == 0.0);
  CHECK(inst.mean_at(1, 2499) == 2.12);
  CHECK(inst.mean_at(1, 2500) == -2.12);
  CHECK(validate_instance(inst, 10000).empty());
  const auto odd = build_two_arm(1.0, 10);
  CHECK(odd.mean_at(1, 2) == 0.5);
  CHECK(odd.mean_at(1, 3) == -0.5);
  CHECK_THROWS_AS(build_two_arm(0.0, 100), ConfigError);
  CHECK_THROWS_AS(build_two_arm(1.0, 3), ConfigError);
}

TEST_CASE("ten-arm family") {
  const auto gaps = ten_arm_gaps();
  REQUIRE(gaps.size() == 9);
  CHECK(gaps.front() == doctest::Approx(1e-3));
  CHECK(gaps.back() == doctest::Approx(10.0));
  for (std::size_t k = 1; k < gaps.size(); ++k) {
    CHECK(gaps[k] / gaps[k - 1] == doctest::Approx(std::sqrt(10.0)));
  }
  const auto inst = build_ten_arm();
  CHECK(inst.arms() == 10);
  CHECK(inst.mean_at(0, 500) == 0.0);
  CHECK(inst.mean_at(9, 999) == doctest::Approx(10.0));
  CHECK(inst.mean_at(9, 1000) == doctest::Approx(-10.0));
  CHECK(validate_instance(inst, 5000).empty());

  // Any allocation pays gap * excess on the arms pulled past 1000 and gap *
  // deficit on the arms left short of it.
  const auto a = oracle_allocation(inst, 10000);
  for (ArmIndex k = 1; k < 10; ++k) CHECK(a.pulls[k] == 1000);
  CHECK(a.pulls[0] == 1000);
  std::vector<PullCount> pulls(10, 1000);
  pulls[3] = 1500;
  pulls[9] = 500;
  const auto r = regret_report(inst, Allocation{pulls}, 10000);
  CHECK(r.regret == doctest::Approx(500 * gaps[2] + 500 * gaps[8]));
}

TEST_CASE("run_episode") {
  const auto inst = build_two_arm(2.0, 100, 0.0);
  EpisodeOptions opts;
  opts.checkpoints = {1, 25, 26, 100};
  opts.keep_trace = true;
  const auto ep = run_episode({"round-robin", "", {}}, inst, 100, opts);
  REQUIRE(ep.trace.size() == 100);
  for (std::size_t t = 0; t < 100; ++t) CHECK(ep.trace[t] == t % 2);
  CHECK(ep.report.policy.pulls == std::vector<PullCount>{50, 50});
  // Oracle collects 25. Round robin pulls the rotting arm 50 times, 25 at +1
  // and 25 at -1.
  CHECK(ep.report.regret == doctest::Approx(25.0));
  REQUIRE(ep.checkpoint_regret.size() == 4);
  CHECK(ep.checkpoint_regret[0] == doctest::Approx(1.0));
  CHECK(ep.checkpoint_regret[1] == doctest::Approx(13.0));
  CHECK(ep.checkpoint_regret[3] == doctest::Approx(25.0));

  opts.presample = true;
  const auto pre = run_episode({"round-robin", "", {}}, inst, 100, opts);
  CHECK(pre.trace == ep.trace);
  CHECK(pre.checkpoint_regret == ep.checkpoint_regret);

  const auto none = run_episode({"fewa", "", {}}, inst, 0, EpisodeOptions{});
  CHECK(none.report.regret == 0.0);
  CHECK(none.seconds < 0.01);
}

TEST_CASE("presampled rewards match lazy rewards") {
  const auto inst = build_ten_arm();
  EpisodeOptions opts;
  opts.seed = 5;
  opts.run_id = 2;
  opts.keep_trace = true;
  opts.checkpoints = {100, 1000, 4000};
  const auto lazy = run_episode({"fewa", "", {}}, inst, 4000, opts);
  opts.presample = true;
  const auto pre = run_episode({"fewa", "", {}}, inst, 4000, opts);
  CHECK(lazy.trace == pre.trace);
  CHECK(lazy.checkpoint_regret == pre.checkpoint_regret);
}

TEST_CASE("monte_carlo") {
  auto config = small_config();
  const auto table = monte_carlo(config);
  CHECK(table.rows.size() == 2 * 4 * 3);
  CHECK(table.pulls.size() == 2 * 4 * 2);
  CHECK(table.summary.size() == 2 * 3);
  const auto* s = table.find("wSWA(0.2)", 200);
  REQUIRE(s != nullptr);
  CHECK(s->runs == 4);
  CHECK(s->q10 <= s->mean);
  CHECK(s->mean <= s->q90);
  CHECK(table.find("fewa", 999) == nullptr);

  SUBCASE("thread count does not change results") {
    config.threads = 1;
    const auto serial = monte_carlo(config);
    REQUIRE(serial.rows.size() == table.rows.size());
    for (std::size_t k = 0; k < table.rows.size(); ++k) {
      CHECK(serial.rows[k].regret == table.rows[k].regret);
      CHECK(serial.rows[k].run_id == table.rows[k].run_id);
    }
  }
  SUBCASE("more runs keep the first rows") {
    config.runs = 8;
    const auto more = monte_carlo(config);
    for (const auto& row : table.rows) {
      const auto it = std::find_if(more.rows.begin(), more.rows.end(), [&](const ResultRow& r) {
        return r.run_id == row.run_id && r.policy == row.policy && r.t == row.t;
      });
      REQUIRE(it != more.rows.end());
      CHECK(it->regret == row.regret);
    }
  }
  SUBCASE("single run: quantiles equal the value") {
    config.runs = 1;
    const auto one = monte_carlo(config);
    for (const auto& row : one.summary) {
      CHECK(row.q10 == row.mean);
      CHECK(row.q90 == row.mean);
      CHECK(row.stderr_mean == 0.0);
    }
  }
  SUBCASE("oracle rows are zero") {
    config.policies = {{"oracle", "", {}}};
    const auto oracle = monte_carlo(config);
    for (const auto& row : oracle.rows) CHECK(row.regret == doctest::Approx(0.0).scale(1.0));
  }
  SUBCASE("errors name the policy") {
    config.policies = {{"fewa", "", {{"bogus", 1}}}};
    CHECK_THROWS_AS(monte_carlo(config), ConfigError);
  }
}

TEST_CASE("checkpoint regret may decrease") {
  // Round robin catches up with the oracle once the good arm has rotted.
  const auto inst = build_two_arm(2.0, 100, 0.0);
  EpisodeOptions opts;
  opts.checkpoints = {25, 50, 100};
  const auto rr = run_episode({"round-robin", "", {}}, inst, 100, opts);
  REQUIRE(rr.checkpoint_regret.size() == 3);
  CHECK(rr.checkpoint_regret[0] == doctest::Approx(13.0));
  CHECK(rr.checkpoint_regret[1] == doctest::Approx(0.0));
  CHECK(rr.checkpoint_regret[2] == doctest::Approx(25.0));
}

TEST_CASE("summaries") {
  CHECK(quantile({3.0, 1.0, 2.0, 4.0}, 0.5) == 2.5);
  CHECK(quantile({1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0, 9.0, 10.0, 11.0}, 0.1) == 2.0);
  CHECK(quantile({5.0}, 0.9) == 5.0);
  CHECK(quantile({0.0, 10.0}, 0.9) == doctest::Approx(9.0));
  CHECK_THROWS_AS(quantile({}, 0.5), std::domain_error);

  std::mt19937_64 rng(8);
  std::normal_distribution<double> noise;
  std::vector<ResultRow> rows;
  for (std::uint64_t r = 0; r < 50; ++r) {
    for (std::size_t t : {10u, 100u}) rows.push_back({r, "p", "i", t, 1e6 * noise(rng), 0.0});
  }
  const auto base = summarize(rows);
  for (int k = 0; k < 5; ++k) {
    std::shuffle(rows.begin(), rows.end(), rng);
    const auto other = summarize(rows);
    for (const auto& s : base) {
      const auto it = std::find_if(other.begin(), other.end(), [&](const SummaryRow& o) { return o.t == s.t; });
      REQUIRE(it != other.end());
      CHECK(it->mean == s.mean);
      CHECK(it->q10 == s.q10);
      CHECK(it->q90 == s.q90);
      CHECK(it->stderr_mean == s.stderr_mean);
    }
  }
  const auto two = summarize({{0, "p", "i", 1, 1.0, 0.0}, {1, "p", "i", 1, 3.0, 0.0}});
  REQUIRE(two.size() == 1);
  CHECK(two[0].mean == 2.0);
  CHECK(two[0].stderr_mean == doctest::Approx(1.0));
}

TEST_CASE("checkpoint grids") {
  const auto g = geometric_checkpoints(10000);
  CHECK(g.front() == 1);
  CHECK(g.back() == 10000);
  CHECK(std::is_sorted(g.begin(), g.end()));
  CHECK(std::adjacent_find(g.begin(), g.end()) == g.end());
  CHECK(geometric_checkpoints(0).empty());
  SweepSpec sweep;
  const auto grid = sweep.grid();
  REQUIRE(grid.size() == 20);
  CHECK(grid.front() == doctest::Approx(0.01));
  CHECK(grid.back() == doctest::Approx(10.0));
  sweep.extra = {0.23, 10.0};
  CHECK(sweep.grid().size() == 21);
}

TEST_CASE("config parsing") {
  const auto c = parse_config(R"({
    "name": "x",
    "instance": {"family": "two_arm", "L": 0.5, "sigma": 2.0},
    "policies": [{"name": "fewa", "alpha": 0.06}, {"name": "wswa", "label": "w", "alpha": 0.2}],
    "horizon": 300, "runs": 3, "seed": 9, "checkpoints": [10, 300], "threads": 1,
    "out_dir": "o", "sweep": {"L_min": 0.1, "L_max": 1.0, "count": 3}
  })");
  CHECK(c.name == "x");
  CHECK(c.instance.L == 0.5);
  CHECK(c.instance.sigma == 2.0);
  REQUIRE(c.policies.size() == 2);
  CHECK(c.policies[0].params.at("alpha") == 0.06);
  CHECK(c.policies[1].display() == "w");
  CHECK(c.horizon == 300);
  CHECK(c.runs == 3);
  CHECK(c.seed == 9);
  CHECK(c.checkpoints == std::vector<std::size_t>{10, 300});
  REQUIRE(c.sweep);
  CHECK(c.sweep->count == 3);

  const char* bad[] = {
      R"({"policies": [{"name": "fewa"}], "bogus": 1})",
      R"({"policies": [{"name": "fewa", "window": 3}]})",
      R"({"policies": [{"name": "nope"}]})",
      R"({"policies": []})",
      R"({"policies": [{"name": "fewa"}, {"name": "fewa"}]})",
      R"({"policies": [{"name": "fewa"}], "runs": 0})",
      R"({"policies": [{"name": "fewa"}], "horizon": 100, "checkpoints": [50, 20]})",
      R"({"policies": [{"name": "fewa"}], "horizon": 100, "checkpoints": [200]})",
      R"({"policies": [{"name": "fewa"}], "instance": {"family": "two_arm", "K": 3}})",
      R"({"policies": [{"name": "fewa"}], "runs": -1})",
      R"({"policies": [{"name": "fewa"}], "runs": "many"})",
      R"({"policies": [{"name": "fewa"},)",
      R"([1, 2])",
  };
  for (const char* text : bad) {
    CAPTURE(text);
    CHECK_THROWS_AS(parse_config(text), ConfigError);
  }
  CHECK_THROWS_AS(load_config("/nonexistent/rotting.json"), IoError);
}

TEST_CASE("csv round trip") {
  const auto dir = scratch("csv");
  const auto table = monte_carlo(small_config());
  export_csv(table, dir);
  CHECK(detect_schema(dir / "results.csv") == kResultsSchema);
  CHECK(detect_schema(dir / "pulls.csv") == kPullsSchema);
  CHECK(detect_schema(dir / "summary.csv") == kSummarySchema);
  const auto back = import_csv(dir / "results.csv");
  CHECK(back.rows == table.rows);
  CHECK(back.pulls == table.pulls);
  REQUIRE(back.summary.size() == table.summary.size());
  for (std::size_t k = 0; k < back.summary.size(); ++k) CHECK(back.summary[k].mean == table.summary[k].mean);

  std::vector<SweepRow> sweep{{"p", 0.01, 1.5, 1.0, 2.0, 0.1, 10}, {"p", 0.1, 2.5, 2.0, 3.0, 0.2, 10}};
  write_sweep_csv(sweep, dir / "sweep.csv");
  const auto sweep_back = read_sweep_csv(dir / "sweep.csv");
  REQUIRE(sweep_back.size() == 2);
  CHECK(sweep_back[1].L == 0.1);
  CHECK(sweep_back[1].mean == 2.5);

  CHECK_THROWS_AS(export_csv(ResultTable{}, dir / "empty"), IoError);
  CHECK_THROWS_AS(read_results_csv(dir / "missing.csv"), IoError);
  CHECK_THROWS_AS(read_results_csv(dir / "pulls.csv"), IoError);
  std::ofstream(dir / "blocker") << "x";
  CHECK_THROWS_AS(export_csv(table, dir / "blocker" / "sub"), IoError);
  fs::remove_all(dir);
}

TEST_CASE("zero-noise run matches the golden file") {
  auto config = small_config();
  config.instance.sigma = 0.0;
  config.policies = {{"fewa", "", {}}, {"eff-fewa", "", {}}, {"ucb1", "", {}}, {"round-robin", "", {}}};
  config.runs = 2;
  auto table = monte_carlo(config);
  for (auto& row : table.rows) row.seconds = 0.0;
  const auto dir = scratch("golden");
  write_results_csv(table.rows, dir / "results.csv");
  const fs::path golden = fs::path(ROTTING_GOLDEN_DIR) / "two_arm_sigma0.csv";
  REQUIRE(fs::exists(golden));
  CHECK(slurp(dir / "results.csv") == slurp(golden));
  fs::remove_all(dir);
}

TEST_CASE("plots are written") {
  const auto dir = scratch("plot");
  const auto table = monte_carlo(small_config());
  const auto svg = render_regret_svg(table, "t");
  CHECK(svg.find("<svg") != std::string::npos);
  CHECK(svg.find("</svg>") != std::string::npos);
  export_csv(table, dir);
  plot_csv(dir / "results.csv", dir / "regret.svg");
  CHECK(fs::file_size(dir / "regret.svg") > 0);
  std::vector<SweepRow> sweep{{"p", 0.01, 1.5, 1.0, 2.0, 0.1, 10}, {"p", 0.1, 2.5, 2.0, 3.0, 0.2, 10}};
  emit_plot(sweep, dir / "sweep.svg");
  CHECK(slurp(dir / "sweep.svg").find("</svg>") != std::string::npos);
  std::ofstream(dir / "blocker") << "x";
  CHECK_THROWS_AS(emit_plot(table, dir / "blocker" / "x.svg"), IoError);
  CHECK_THROWS_AS(plot_csv(dir / "missing.csv", dir / "x.svg"), IoError);
  fs::remove_all(dir);
}
