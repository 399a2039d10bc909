#include "rotting/results_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace rotting {

namespace fs = std::filesystem;

namespace {

std::ofstream open_out(const fs::path& path) {
  if (path.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
    if (ec) throw IoError("cannot create directory '" + path.parent_path().string() + "': " + ec.message());
  }
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out.precision(17);
  return out;
}

void check_field(const std::string& s, const fs::path& path) {
  if (s.find_first_of(",\"\n") != std::string::npos) {
    throw IoError("'" + path.string() + "': field '" + s + "' contains a separator");
  }
}

void finish(std::ofstream& out, const fs::path& path) {
  out.flush();
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream is(line);
  while (std::getline(is, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

template <class T>
T parse_number(const std::string& s, const fs::path& path, std::size_t line) {
  T value{};
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, value);
  if (ec != std::errc{} || ptr != end) {
    throw IoError("'" + path.string() + "' line " + std::to_string(line) + ": bad number '" + s + "'");
  }
  return value;
}

// Calls row(fields, line_no) for every data line after checking the header.
template <class RowFn>
void read_table(const fs::path& path, const char* header, std::size_t columns, RowFn&& row) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read '" + path.string() + "'");
  std::string line;
  std::size_t line_no = 0;
  bool seen_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    if (!seen_header) {
      if (line != header) {
        throw IoError("'" + path.string() + "': unexpected header '" + line + "'");
      }
      seen_header = true;
      continue;
    }
    const auto fields = split(line);
    if (fields.size() != columns) {
      throw IoError("'" + path.string() + "' line " + std::to_string(line_no) + ": expected " +
                    std::to_string(columns) + " fields");
    }
    row(fields, line_no);
  }
  if (!seen_header) throw IoError("'" + path.string() + "': missing header");
}

}  // namespace

void write_results_csv(const std::vector<ResultRow>& rows, const fs::path& path) {
  auto out = open_out(path);
  out << "# schema: " << kResultsSchema << '\n' << kResultsHeader << '\n';
  for (const auto& r : rows) {
    check_field(r.policy, path);
    check_field(r.instance, path);
    out << r.run_id << ',' << r.policy << ',' << r.instance << ',' << r.t << ',' << r.regret << ','
        << r.seconds << '\n';
  }
  finish(out, path);
}

void write_pulls_csv(const std::vector<PullRow>& rows, const fs::path& path) {
  auto out = open_out(path);
  out << "# schema: " << kPullsSchema << '\n' << kPullsHeader << '\n';
  for (const auto& r : rows) {
    check_field(r.policy, path);
    check_field(r.instance, path);
    out << r.run_id << ',' << r.policy << ',' << r.instance << ',' << r.arm << ',' << r.pulls << ','
        << r.oracle_pulls << ',' << r.arm_key << ',' << r.arm_regret << '\n';
  }
  finish(out, path);
}

void write_summary_csv(const std::vector<SummaryRow>& rows, const fs::path& path) {
  auto out = open_out(path);
  out << "# schema: " << kSummarySchema << '\n' << kSummaryHeader << '\n';
  for (const auto& r : rows) {
    out << r.policy << ',' << r.instance << ',' << r.t << ',' << r.mean << ',' << r.q10 << ','
        << r.q90 << ',' << r.stderr_mean << ',' << r.runs << '\n';
  }
  finish(out, path);
}

void write_sweep_csv(const std::vector<SweepRow>& rows, const fs::path& path) {
  auto out = open_out(path);
  out << "# schema: " << kSweepSchema << '\n' << kSweepHeader << '\n';
  for (const auto& r : rows) {
    check_field(r.policy, path);
    out << r.policy << ',' << r.L << ',' << r.mean << ',' << r.q10 << ',' << r.q90 << ','
        << r.stderr_mean << ',' << r.runs << '\n';
  }
  finish(out, path);
}

void write_bench_csv(const std::vector<BenchRow>& rows, const fs::path& path) {
  auto out = open_out(path);
  out << "# schema: " << kBenchSchema << '\n' << kBenchHeader << '\n';
  for (const auto& r : rows) {
    out << r.policy << ',' << r.runs << ',' << r.total_seconds << ',' << r.mean_seconds << ','
        << r.mean_regret << ',';
    if (r.statistic_count) out << *r.statistic_count;
    out << '\n';
  }
  finish(out, path);
}

void export_csv(const ResultTable& table, const fs::path& dir) {
  if (table.rows.empty()) throw IoError("refusing to export an empty result table to '" + dir.string() + "'");
  write_results_csv(table.rows, dir / "results.csv");
  write_pulls_csv(table.pulls, dir / "pulls.csv");
  write_summary_csv(table.summary.empty() ? summarize(table.rows) : table.summary,
                    dir / "summary.csv");
}

std::vector<ResultRow> read_results_csv(const fs::path& path) {
  std::vector<ResultRow> rows;
  read_table(path, kResultsHeader, 6, [&](const std::vector<std::string>& f, std::size_t line) {
    rows.push_back({parse_number<std::uint64_t>(f[0], path, line), f[1], f[2],
                    parse_number<std::size_t>(f[3], path, line), parse_number<double>(f[4], path, line),
                    parse_number<double>(f[5], path, line)});
  });
  return rows;
}

std::vector<PullRow> read_pulls_csv(const fs::path& path) {
  std::vector<PullRow> rows;
  read_table(path, kPullsHeader, 8, [&](const std::vector<std::string>& f, std::size_t line) {
    rows.push_back({parse_number<std::uint64_t>(f[0], path, line), f[1], f[2],
                    parse_number<std::size_t>(f[3], path, line),
                    parse_number<std::size_t>(f[4], path, line),
                    parse_number<std::size_t>(f[5], path, line), parse_number<double>(f[6], path, line),
                    parse_number<double>(f[7], path, line)});
  });
  return rows;
}

std::vector<SweepRow> read_sweep_csv(const fs::path& path) {
  std::vector<SweepRow> rows;
  read_table(path, kSweepHeader, 7, [&](const std::vector<std::string>& f, std::size_t line) {
    rows.push_back({f[0], parse_number<double>(f[1], path, line), parse_number<double>(f[2], path, line),
                    parse_number<double>(f[3], path, line), parse_number<double>(f[4], path, line),
                    parse_number<double>(f[5], path, line), parse_number<std::size_t>(f[6], path, line)});
  });
  return rows;
}

ResultTable import_csv(const fs::path& results_path) {
  ResultTable table;
  table.rows = read_results_csv(results_path);
  const auto pulls = results_path.parent_path() / "pulls.csv";
  if (fs::exists(pulls)) table.pulls = read_pulls_csv(pulls);
  table.summary = summarize(table.rows);
  return table;
}

std::string detect_schema(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read '" + path.string() + "'");
  std::string line;
  const std::string prefix = "# schema: ";
  if (std::getline(in, line) && line.rfind(prefix, 0) == 0) return line.substr(prefix.size());
  return "";
}

}  // namespace rotting
