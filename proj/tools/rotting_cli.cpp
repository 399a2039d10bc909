// Command-line front end: run / sweep / bench / plot.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "rotting/config.hpp"
#include "rotting/experiment.hpp"
#include "rotting/plot.hpp"
#include "rotting/results_io.hpp"

namespace fs = std::filesystem;

namespace {

enum ExitCode : int { kOk = 0, kFailure = 1, kConfig = 2, kIo = 3 };

int fail(ExitCode code, const char* kind, const std::string& message) {
  nlohmann::json line{{"error", kind}, {"message", message}, {"exit_code", static_cast<int>(code)}};
  std::cerr << line.dump() << std::endl;
  return code;
}

struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> runs;
  std::optional<std::size_t> threads;
  std::optional<std::string> out_dir;

  void apply(rotting::ExperimentConfig& c) const {
    if (seed) c.seed = *seed;
    if (runs) c.runs = *runs;
    if (threads) c.threads = *threads;
    if (out_dir) c.out_dir = *out_dir;
    c.validate();
  }
};

void print_final(const rotting::ResultTable& table, std::size_t horizon) {
  std::printf("%-28s %12s %12s %12s\n", "policy", "mean", "q10", "q90");
  for (const auto& s : table.summary) {
    if (s.t != horizon) continue;
    std::printf("%-28s %12.4f %12.4f %12.4f\n", s.policy.c_str(), s.mean, s.q10, s.q90);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rotting bandit benchmark harness"};
  app.require_subcommand(1);

  Overrides ov;
  auto add_overrides = [&ov](CLI::App* cmd) {
    cmd->add_option("--seed", ov.seed, "Base seed");
    cmd->add_option("--runs", ov.runs, "Monte Carlo repetitions");
    cmd->add_option("--threads", ov.threads, "Worker threads (0 = all cores)");
    cmd->add_option("--out-dir", ov.out_dir, "Output directory");
  };

  std::string config_path;
  auto* run = app.add_subcommand("run", "Run one experiment; writes results/pulls/summary CSV and an SVG");
  run->add_option("config", config_path, "Experiment config (JSON)")->required();
  add_overrides(run);

  auto* sweep = app.add_subcommand("sweep", "Final regret over an L grid on the two-arm family");
  sweep->add_option("config", config_path, "Experiment config with a sweep section")->required();
  add_overrides(sweep);

  auto* bench = app.add_subcommand("bench", "Single-threaded per-policy runtime");
  bench->add_option("config", config_path, "Experiment config (JSON)")->required();
  add_overrides(bench);

  std::string csv_path, svg_path;
  auto* plot = app.add_subcommand("plot", "Render results.csv or sweep.csv as SVG");
  plot->add_option("csv", csv_path, "Input CSV")->required();
  plot->add_option("out", svg_path, "Output SVG")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail(kConfig, "usage", e.what());
  }

  try {
    if (*plot) {
      rotting::plot_csv(csv_path, svg_path);
      std::cout << "wrote " << svg_path << "\n";
      return kOk;
    }

    auto config = rotting::load_config(config_path);
    ov.apply(config);
    const fs::path out = config.out_dir;

    if (*run) {
      const auto table = rotting::monte_carlo(config);
      rotting::export_csv(table, out);
      rotting::emit_plot(table, out / "regret.svg");
      print_final(table, config.horizon);
      std::cout << "wrote " << (out / "results.csv").string() << "\n";
    } else if (*sweep) {
      const auto rows = rotting::sweep_two_arm(config);
      rotting::write_sweep_csv(rows, out / "sweep.csv");
      rotting::emit_plot(rows, out / "sweep.svg");
      std::printf("%-28s %10s %12s %12s %12s\n", "policy", "L", "mean", "q10", "q90");
      for (const auto& r : rows) {
        std::printf("%-28s %10.4g %12.4f %12.4f %12.4f\n", r.policy.c_str(), r.L, r.mean, r.q10, r.q90);
      }
      std::cout << "wrote " << (out / "sweep.csv").string() << "\n";
    } else if (*bench) {
      config.threads = 1;
      const auto rows = rotting::bench_runtime(config);
      rotting::write_bench_csv(rows, out / "bench.csv");
      std::printf("%-28s %8s %14s %14s %12s %10s\n", "policy", "runs", "total_s", "mean_s",
                  "regret", "stats");
      for (const auto& r : rows) {
        std::printf("%-28s %8zu %14.4f %14.6f %12.4f %10s\n", r.policy.c_str(), r.runs,
                    r.total_seconds, r.mean_seconds, r.mean_regret,
                    r.statistic_count ? std::to_string(*r.statistic_count).c_str() : "-");
      }
      std::cout << "wrote " << (out / "bench.csv").string() << "\n";
    }
    return kOk;
  } catch (const rotting::ConfigError& e) {
    return fail(kConfig, "config", e.what());
  } catch (const rotting::IoError& e) {
    return fail(kIo, "io", e.what());
  } catch (const std::exception& e) {
    return fail(kFailure, "runtime", e.what());
  }
}
