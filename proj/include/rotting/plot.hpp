#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "rotting/experiment.hpp"

namespace rotting {

/// Regret-over-time panel (mean curve plus 10%-90% band per policy). When the
/// table carries per-arm rows for more than two arms, a second panel shows the
/// mean final regret per arm, keyed by each arm's initial mean.
std::string render_regret_svg(const ResultTable& table, const std::string& title);

/// Final regret against L on a log-x axis, one curve and band per policy.
std::string render_sweep_svg(const std::vector<SweepRow>& rows, const std::string& title);

/// Writes the rendered SVG; IoError on failure.
void emit_plot(const ResultTable& table, const std::filesystem::path& path);
void emit_plot(const std::vector<SweepRow>& rows, const std::filesystem::path& path);

/// Reads a results.csv or sweep.csv written by this library and plots it.
void plot_csv(const std::filesystem::path& csv, const std::filesystem::path& out);

}  // namespace rotting
