#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "rotting/experiment.hpp"

namespace rotting {

/// Failure to read or write a result file; the message names the path.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// CSV files start with a "# schema: <name>/<version>" line followed by the
// header. Readers skip comment lines and check the header.
inline constexpr const char* kResultsSchema = "rotting-results/1";
inline constexpr const char* kResultsHeader = "run_id,policy,instance,t,regret,seconds";
inline constexpr const char* kPullsSchema = "rotting-pulls/1";
inline constexpr const char* kPullsHeader =
    "run_id,policy,instance,arm,pulls,oracle_pulls,arm_key,arm_regret";
inline constexpr const char* kSummarySchema = "rotting-summary/1";
inline constexpr const char* kSummaryHeader = "policy,instance,t,mean,q10,q90,stderr,runs";
inline constexpr const char* kSweepSchema = "rotting-sweep/1";
inline constexpr const char* kSweepHeader = "policy,L,mean,q10,q90,stderr,runs";
inline constexpr const char* kBenchSchema = "rotting-bench/1";
inline constexpr const char* kBenchHeader =
    "policy,runs,total_seconds,mean_seconds,mean_regret,statistic_count";

void write_results_csv(const std::vector<ResultRow>& rows, const std::filesystem::path& path);
void write_pulls_csv(const std::vector<PullRow>& rows, const std::filesystem::path& path);
void write_summary_csv(const std::vector<SummaryRow>& rows, const std::filesystem::path& path);
void write_sweep_csv(const std::vector<SweepRow>& rows, const std::filesystem::path& path);
void write_bench_csv(const std::vector<BenchRow>& rows, const std::filesystem::path& path);

/// Writes results.csv, pulls.csv and summary.csv into dir (created if
/// needed). An empty table is an error.
void export_csv(const ResultTable& table, const std::filesystem::path& dir);

std::vector<ResultRow> read_results_csv(const std::filesystem::path& path);
std::vector<PullRow> read_pulls_csv(const std::filesystem::path& path);
std::vector<SweepRow> read_sweep_csv(const std::filesystem::path& path);

/// Reads results.csv (and pulls.csv next to it, when present) and rebuilds
/// the summary.
ResultTable import_csv(const std::filesystem::path& results_path);

/// Schema tag of a CSV file written by this library ("" if none).
std::string detect_schema(const std::filesystem::path& path);

}  // namespace rotting
