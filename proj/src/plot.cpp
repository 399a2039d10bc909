#include "rotting/plot.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#include "rotting/results_io.hpp"

namespace rotting {

namespace {

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
                                    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

const char* color(std::size_t k) { return kPalette[k % std::size(kPalette)]; }

std::string escape(const std::string& s) {
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

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(4);
  os << v;
  return os.str();
}

struct Panel {
  double left, top, width, height;
  double xmin, xmax, ymin, ymax;
  bool log_x = false;

  double x(double v) const {
    const double a = log_x ? std::log10(v) : v;
    const double lo = log_x ? std::log10(xmin) : xmin;
    const double hi = log_x ? std::log10(xmax) : xmax;
    return left + (hi > lo ? (a - lo) / (hi - lo) : 0.5) * width;
  }
  double y(double v) const {
    return top + height - (ymax > ymin ? (v - ymin) / (ymax - ymin) : 0.5) * height;
  }
};

std::vector<double> linear_ticks(double lo, double hi) {
  std::vector<double> ticks;
  if (!(hi > lo)) return {lo};
  const double raw = (hi - lo) / 5.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double m : {1.0, 2.0, 5.0, 10.0}) {
    if (raw <= m * mag) {
      step = m * mag;
      break;
    }
  }
  for (double v = std::ceil(lo / step) * step; v <= hi + 1e-9 * step; v += step) {
    ticks.push_back(std::abs(v) < 1e-12 * step ? 0.0 : v);
  }
  return ticks;
}

std::vector<double> log_ticks(double lo, double hi) {
  std::vector<double> ticks;
  for (double e = std::floor(std::log10(lo)); e <= std::ceil(std::log10(hi)); e += 1.0) {
    const double v = std::pow(10.0, e);
    if (v >= lo * (1 - 1e-9) && v <= hi * (1 + 1e-9)) ticks.push_back(v);
  }
  return ticks;
}

class Svg {
 public:
  Svg(double width, double height) : width_(width), height_(height) {}

  void axes(const Panel& p, const std::string& x_label, const std::string& y_label) {
    os_ << "<g class=\"axes\" font-family=\"sans-serif\" font-size=\"11\">\n";
    os_ << "<rect x=\"" << p.left << "\" y=\"" << p.top << "\" width=\"" << p.width
        << "\" height=\"" << p.height << "\" fill=\"none\" stroke=\"#333\"/>\n";
    const auto xt = p.log_x ? log_ticks(p.xmin, p.xmax) : linear_ticks(p.xmin, p.xmax);
    for (double v : xt) {
      const double px = p.x(v);
      os_ << "<line x1=\"" << px << "\" y1=\"" << p.top + p.height << "\" x2=\"" << px
          << "\" y2=\"" << p.top + p.height + 4 << "\" stroke=\"#333\"/>\n";
      os_ << "<text x=\"" << px << "\" y=\"" << p.top + p.height + 16
          << "\" text-anchor=\"middle\">" << escape(fmt(v)) << "</text>\n";
    }
    for (double v : linear_ticks(p.ymin, p.ymax)) {
      const double py = p.y(v);
      os_ << "<line x1=\"" << p.left - 4 << "\" y1=\"" << py << "\" x2=\"" << p.left + p.width
          << "\" y2=\"" << py << "\" stroke=\"#ddd\"/>\n";
      os_ << "<text x=\"" << p.left - 6 << "\" y=\"" << py + 4 << "\" text-anchor=\"end\">"
          << escape(fmt(v)) << "</text>\n";
    }
    os_ << "<text x=\"" << p.left + p.width / 2 << "\" y=\"" << p.top + p.height + 34
        << "\" text-anchor=\"middle\">" << escape(x_label) << "</text>\n";
    os_ << "<text transform=\"translate(" << p.left - 48 << "," << p.top + p.height / 2
        << ") rotate(-90)\" text-anchor=\"middle\">" << escape(y_label) << "</text>\n";
    os_ << "</g>\n";
  }

  void title(double x, double y, const std::string& text) {
    os_ << "<text x=\"" << x << "\" y=\"" << y
        << "\" font-family=\"sans-serif\" font-size=\"14\" text-anchor=\"middle\">" << escape(text)
        << "</text>\n";
  }

  void band(const Panel& p, const std::vector<double>& xs, const std::vector<double>& lo,
            const std::vector<double>& hi, const char* fill) {
    if (xs.empty()) return;
    os_ << "<polygon fill=\"" << fill << "\" fill-opacity=\"0.18\" stroke=\"none\" points=\"";
    for (std::size_t k = 0; k < xs.size(); ++k) os_ << p.x(xs[k]) << ',' << p.y(hi[k]) << ' ';
    for (std::size_t k = xs.size(); k-- > 0;) os_ << p.x(xs[k]) << ',' << p.y(lo[k]) << ' ';
    os_ << "\"/>\n";
  }

  void line(const Panel& p, const std::vector<double>& xs, const std::vector<double>& ys,
            const char* stroke) {
    if (xs.empty()) return;
    os_ << "<polyline fill=\"none\" stroke=\"" << stroke << "\" stroke-width=\"1.6\" points=\"";
    for (std::size_t k = 0; k < xs.size(); ++k) os_ << p.x(xs[k]) << ',' << p.y(ys[k]) << ' ';
    os_ << "\"/>\n";
  }

  void rect(double x, double y, double w, double h, const char* fill) {
    os_ << "<rect x=\"" << x << "\" y=\"" << y << "\" width=\"" << std::max(w, 0.0)
        << "\" height=\"" << std::max(h, 0.0) << "\" fill=\"" << fill << "\"/>\n";
  }

  void text(double x, double y, const std::string& s, const char* anchor = "start") {
    os_ << "<text x=\"" << x << "\" y=\"" << y
        << "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"" << anchor << "\">"
        << escape(s) << "</text>\n";
  }

  void legend(double x, double y, const std::vector<std::string>& names) {
    for (std::size_t k = 0; k < names.size(); ++k) {
      const double yy = y + 16.0 * static_cast<double>(k);
      rect(x, yy - 8, 14, 8, color(k));
      text(x + 20, yy, names[k]);
    }
  }

  std::string str() const {
    std::ostringstream out;
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << width_
        << "\" height=\"" << height_ << "\" viewBox=\"0 0 " << width_ << ' ' << height_ << "\">\n"
        << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
        << os_.str() << "</svg>\n";
    return out.str();
  }

 private:
  double width_, height_;
  std::ostringstream os_;
};

std::vector<std::string> policy_order(const std::vector<SummaryRow>& rows) {
  std::vector<std::string> out;
  for (const auto& r : rows) {
    if (std::find(out.begin(), out.end(), r.policy) == out.end()) out.push_back(r.policy);
  }
  return out;
}

void write_file(const std::string& content, const std::filesystem::path& path) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << content;
  out.flush();
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

}  // namespace

std::string render_regret_svg(const ResultTable& table, const std::string& title) {
  const auto summary = table.summary.empty() ? summarize(table.rows) : table.summary;
  if (summary.empty()) throw std::invalid_argument("nothing to plot");

  std::map<ArmIndex, double> arm_keys;
  for (const auto& r : table.pulls) arm_keys[r.arm] = r.arm_key;
  const bool per_arm = arm_keys.size() > 2;

  const double width = 900;
  const double height = per_arm ? 820 : 440;
  Svg svg(width, height);
  svg.title(width / 2, 22, title);

  const auto policies = policy_order(summary);
  Panel p{80, 40, 600, 330, std::numeric_limits<double>::max(), 0, 0, 0};
  for (const auto& s : summary) {
    p.xmin = std::min(p.xmin, static_cast<double>(s.t));
    p.xmax = std::max(p.xmax, static_cast<double>(s.t));
    p.ymin = std::min({p.ymin, s.q10, s.mean});
    p.ymax = std::max({p.ymax, s.q90, s.mean});
  }
  p.xmin = 0;
  if (p.ymax <= p.ymin) p.ymax = p.ymin + 1;
  svg.axes(p, "round t", "regret");
  for (std::size_t k = 0; k < policies.size(); ++k) {
    std::vector<double> xs, mean, lo, hi;
    for (const auto& s : summary) {
      if (s.policy != policies[k]) continue;
      xs.push_back(static_cast<double>(s.t));
      mean.push_back(s.mean);
      lo.push_back(s.q10);
      hi.push_back(s.q90);
    }
    svg.band(p, xs, lo, hi, color(k));
    svg.line(p, xs, mean, color(k));
  }
  svg.legend(700, 60, policies);

  if (per_arm) {
    // Mean final per-arm regret, grouped by arm.
    std::map<std::pair<std::string, ArmIndex>, std::pair<double, std::size_t>> acc;
    for (const auto& r : table.pulls) {
      auto& a = acc[{r.policy, r.arm}];
      a.first += r.arm_regret;
      ++a.second;
    }
    Panel b{80, 450, 600, 300, 0, static_cast<double>(arm_keys.size()), 0, 0};
    for (const auto& [key, value] : acc) {
      const double m = value.first / static_cast<double>(value.second);
      b.ymin = std::min(b.ymin, m);
      b.ymax = std::max(b.ymax, m);
    }
    if (b.ymax <= b.ymin) b.ymax = b.ymin + 1;
    svg.axes(b, "arm (initial mean)", "regret per arm at T");
    const double slot = b.width / static_cast<double>(arm_keys.size());
    const double bar = slot * 0.8 / static_cast<double>(std::max<std::size_t>(policies.size(), 1));
    std::size_t slot_index = 0;
    for (const auto& [arm, key] : arm_keys) {
      const double x0 = b.left + slot * static_cast<double>(slot_index) + slot * 0.1;
      for (std::size_t k = 0; k < policies.size(); ++k) {
        auto it = acc.find({policies[k], arm});
        if (it == acc.end()) continue;
        const double m = it->second.first / static_cast<double>(it->second.second);
        const double y0 = b.y(std::max(m, 0.0));
        const double y1 = b.y(std::min(m, 0.0));
        svg.rect(x0 + bar * static_cast<double>(k), y0, bar, y1 - y0, color(k));
      }
      svg.text(x0 + slot * 0.4, b.top + b.height + 28, fmt(key), "middle");
      ++slot_index;
    }
  }
  return svg.str();
}

std::string render_sweep_svg(const std::vector<SweepRow>& rows, const std::string& title) {
  if (rows.empty()) throw std::invalid_argument("nothing to plot");
  std::vector<std::string> policies;
  for (const auto& r : rows) {
    if (std::find(policies.begin(), policies.end(), r.policy) == policies.end()) {
      policies.push_back(r.policy);
    }
  }
  Panel p{80, 40, 600, 330, std::numeric_limits<double>::max(), 0, 0, 0, true};
  for (const auto& r : rows) {
    p.xmin = std::min(p.xmin, r.L);
    p.xmax = std::max(p.xmax, r.L);
    p.ymin = std::min({p.ymin, r.q10, r.mean});
    p.ymax = std::max({p.ymax, r.q90, r.mean});
  }
  if (p.ymax <= p.ymin) p.ymax = p.ymin + 1;
  Svg svg(900, 440);
  svg.title(450, 22, title);
  svg.axes(p, "L (log scale)", "regret at T");
  for (std::size_t k = 0; k < policies.size(); ++k) {
    std::vector<const SweepRow*> mine;
    for (const auto& r : rows) {
      if (r.policy == policies[k]) mine.push_back(&r);
    }
    std::sort(mine.begin(), mine.end(), [](auto* a, auto* b) { return a->L < b->L; });
    std::vector<double> xs, mean, lo, hi;
    for (const auto* r : mine) {
      xs.push_back(r->L);
      mean.push_back(r->mean);
      lo.push_back(r->q10);
      hi.push_back(r->q90);
    }
    svg.band(p, xs, lo, hi, color(k));
    svg.line(p, xs, mean, color(k));
  }
  svg.legend(700, 60, policies);
  return svg.str();
}

void emit_plot(const ResultTable& table, const std::filesystem::path& path) {
  if (table.rows.empty() && table.summary.empty()) throw IoError("empty table, nothing to plot");
  const std::string title = table.rows.empty() ? "regret" : "regret on " + table.rows.front().instance;
  write_file(render_regret_svg(table, title), path);
}

void emit_plot(const std::vector<SweepRow>& rows, const std::filesystem::path& path) {
  if (rows.empty()) throw IoError("empty sweep, nothing to plot");
  write_file(render_sweep_svg(rows, "final regret against L"), path);
}

void plot_csv(const std::filesystem::path& csv, const std::filesystem::path& out) {
  const std::string schema = detect_schema(csv);
  if (schema == kSweepSchema) {
    emit_plot(read_sweep_csv(csv), out);
  } else if (schema == kResultsSchema) {
    emit_plot(import_csv(csv), out);
  } else {
    throw IoError("'" + csv.string() + "' is not a results or sweep file (schema '" + schema + "')");
  }
}

}  // namespace rotting
