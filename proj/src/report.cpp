#include "wasn/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#include "wasn/error.hpp"

namespace wasn {

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string coord(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double to_double(const std::string& s, int line) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || *end != '\0') {
    throw Error(ErrorKind::Io, "csv line " + std::to_string(line) + ": bad number '" + s + "'");
  }
  return v;
}

long to_long(const std::string& s, int line) {
  char* end = nullptr;
  const long v = std::strtol(s.c_str(), &end, 10);
  if (s.empty() || *end != '\0') {
    throw Error(ErrorKind::Io, "csv line " + std::to_string(line) + ": bad integer '" + s + "'");
  }
  return v;
}

std::vector<std::vector<std::string>> parse_table(const std::string& text, const char* header,
                                                  std::size_t fields) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != header) {
    throw Error(ErrorKind::Io, std::string("csv header mismatch, expected: ") + header);
  }
  std::vector<std::vector<std::string>> rows;
  int n = 1;
  while (std::getline(in, line)) {
    ++n;
    if (line.empty()) continue;
    auto f = split(line);
    if (f.size() != fields) {
      throw Error(ErrorKind::Io, "csv line " + std::to_string(n) + ": expected " +
                                     std::to_string(fields) + " fields");
    }
    rows.push_back(std::move(f));
  }
  return rows;
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

struct Curve {
  std::string algorithm;
  std::string pruning;
  double c_target = 0.0;
  std::vector<double> values;  // by iteration
};

std::string curve_label(const Curve& c) {
  if (c.algorithm == "DANSE") return "DANSE (FC)";
  if (c.algorithm == "TIDANSE") return "TI-DANSE";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "TI-DANSE+ (C=%.3g)", c.c_target);
  return buf;
}

const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                          "#8c564b", "#e377c2", "#17becf", "#bcbd22", "#7f7f7f"};

}  // namespace

std::string results_csv(const std::vector<ResultRow>& rows) {
  std::string out = std::string(kResultsHeader) + "\n";
  for (const ResultRow& r : rows) {
    out += std::to_string(r.environment_id) + "," + r.algorithm + "," + r.pruning + "," +
           num(r.c_target) + "," + num(r.c_achieved) + "," + std::to_string(r.iteration) + "," +
           num(r.mse_w) + "," + std::to_string(r.transmit_cost) + "\n";
  }
  return out;
}

std::string aggregate_csv(const std::vector<AggregateRow>& rows) {
  std::string out = std::string(kAggregateHeader) + "\n";
  for (const AggregateRow& r : rows) {
    out += r.algorithm + "," + r.pruning + "," + num(r.c_target) + "," +
           std::to_string(r.iteration) + "," + num(r.mse_w_geomean) + "," +
           std::to_string(r.n_environments) + "\n";
  }
  return out;
}

std::string failures_csv(const std::vector<FailureRow>& rows) {
  std::string out = std::string(kFailuresHeader) + "\n";
  for (const FailureRow& r : rows) {
    std::string msg = r.message;
    std::replace(msg.begin(), msg.end(), ',', ';');
    std::replace(msg.begin(), msg.end(), '\n', ' ');
    out += std::to_string(r.environment_id) + "," + r.algorithm + "," + r.pruning + "," +
           num(r.c_target) + "," + msg + "\n";
  }
  return out;
}

std::vector<ResultRow> parse_results_csv(const std::string& text) {
  std::vector<ResultRow> out;
  int line = 1;
  for (const auto& f : parse_table(text, kResultsHeader, 8)) {
    ++line;
    out.push_back({static_cast<int>(to_long(f[0], line)), f[1], f[2], to_double(f[3], line),
                   to_double(f[4], line), static_cast<int>(to_long(f[5], line)),
                   to_double(f[6], line), to_long(f[7], line)});
  }
  return out;
}

std::vector<AggregateRow> parse_aggregate_csv(const std::string& text) {
  std::vector<AggregateRow> out;
  int line = 1;
  for (const auto& f : parse_table(text, kAggregateHeader, 6)) {
    ++line;
    out.push_back({f[0], f[1], to_double(f[2], line), static_cast<int>(to_long(f[3], line)),
                   to_double(f[4], line), static_cast<int>(to_long(f[5], line))});
  }
  return out;
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(ErrorKind::Io, "write failed for " + path.string());
}

void emit_csv(const ResultTable& table, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorKind::Io, "cannot create " + dir.string() + ": " + ec.message());
  write_text(dir / "results.csv", results_csv(table.rows));
  write_text(dir / "aggregate.csv", aggregate_csv(table.aggregates));
  write_text(dir / "failures.csv", failures_csv(table.failures));
}

std::vector<AggregateRow> load_aggregates(const std::filesystem::path& path) {
  const std::string text = read_text(path);
  const std::string first = text.substr(0, text.find('\n'));
  if (first == kAggregateHeader) return parse_aggregate_csv(text);
  if (first == kResultsHeader) return aggregate_rows(parse_results_csv(text));
  throw Error(ErrorKind::Io, path.string() + ": neither a results nor an aggregate CSV");
}

std::string convergence_plot_svg(const std::vector<AggregateRow>& aggregates) {
  if (aggregates.empty()) throw Error(ErrorKind::InvalidArgument, "nothing to plot: no aggregate rows");

  std::vector<Curve> curves;
  std::map<std::tuple<std::string, std::string, double>, std::size_t> index;
  for (const AggregateRow& r : aggregates) {
    const auto key = std::make_tuple(r.algorithm, r.pruning, r.c_target);
    auto it = index.find(key);
    if (it == index.end()) {
      it = index.emplace(key, curves.size()).first;
      curves.push_back({r.algorithm, r.pruning, r.c_target, {}});
    }
    auto& v = curves[it->second].values;
    if (static_cast<int>(v.size()) <= r.iteration)
      v.resize(r.iteration + 1, std::numeric_limits<double>::quiet_NaN());
    v[r.iteration] = r.mse_w_geomean;
  }

  // Panels follow the TI-DANSE+ pruning strategies; baselines appear in each.
  std::vector<std::string> panels;
  for (const Curve& c : curves)
    if (c.algorithm == "TIDANSEplus" && std::find(panels.begin(), panels.end(), c.pruning) == panels.end())
      panels.push_back(c.pruning);
  if (panels.empty()) panels.push_back("");

  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  std::size_t max_len = 1;
  for (const Curve& c : curves) {
    max_len = std::max(max_len, c.values.size());
    for (double v : c.values) {
      if (v > 0.0 && std::isfinite(v)) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
    }
  }
  if (!std::isfinite(lo)) {
    lo = 1e-1;
    hi = 1e1;
  }
  double dec_lo = std::floor(std::log10(lo));
  double dec_hi = std::ceil(std::log10(hi));
  if (dec_hi <= dec_lo) dec_hi = dec_lo + 1.0;
  const double x_max = std::max<double>(1.0, static_cast<double>(max_len - 1));

  const double width = 900, panel_h = 380, left = 80, right = 230, top = 40, bottom = 50;
  const double plot_w = width - left - right;
  const double plot_h = panel_h - top - bottom;
  const double height = panel_h * static_cast<double>(panels.size());

  std::ostringstream svg;
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" viewBox=\"0 0 " << width << " " << height << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
      << "<rect x=\"0\" y=\"0\" width=\"" << width << "\" height=\"" << height << "\" fill=\"white\"/>\n";

  for (std::size_t p = 0; p < panels.size(); ++p) {
    const double y0 = panel_h * static_cast<double>(p) + top;
    auto sx = [&](double i) { return left + plot_w * i / x_max; };
    auto sy = [&](double v) {
      const double d = std::clamp(std::log10(v), dec_lo, dec_hi);
      return y0 + plot_h * (dec_hi - d) / (dec_hi - dec_lo);
    };
    const std::string title = panels[p].empty() ? "all" : panels[p] + " pruning";
    svg << "<g class=\"panel\" data-pruning=\"" << xml_escape(panels[p]) << "\">\n"
        << "<text x=\"" << coord(left + plot_w / 2) << "\" y=\"" << coord(y0 - 14)
        << "\" text-anchor=\"middle\" font-size=\"14\">" << xml_escape(title) << "</text>\n"
        << "<rect x=\"" << coord(left) << "\" y=\"" << coord(y0) << "\" width=\"" << coord(plot_w)
        << "\" height=\"" << coord(plot_h) << "\" fill=\"none\" stroke=\"black\"/>\n";
    const int step = std::max(1, static_cast<int>((dec_hi - dec_lo) / 8.0 + 0.999));
    for (int d = static_cast<int>(dec_lo); d <= static_cast<int>(dec_hi); d += step) {
      const double y = sy(std::pow(10.0, d));
      svg << "<line x1=\"" << coord(left) << "\" y1=\"" << coord(y) << "\" x2=\"" << coord(left + plot_w)
          << "\" y2=\"" << coord(y) << "\" stroke=\"#dddddd\"/>\n"
          << "<text x=\"" << coord(left - 6) << "\" y=\"" << coord(y + 4)
          << "\" text-anchor=\"end\">1e" << d << "</text>\n";
    }
    for (int t = 0; t <= 5; ++t) {
      const double i = x_max * t / 5.0;
      svg << "<text x=\"" << coord(sx(i)) << "\" y=\"" << coord(y0 + plot_h + 16)
          << "\" text-anchor=\"middle\">" << static_cast<long>(std::lround(i)) << "</text>\n";
    }
    svg << "<text x=\"" << coord(left + plot_w / 2) << "\" y=\"" << coord(y0 + plot_h + 36)
        << "\" text-anchor=\"middle\">iteration i</text>\n"
        << "<text transform=\"translate(" << coord(left - 56) << "," << coord(y0 + plot_h / 2)
        << ") rotate(-90)\" text-anchor=\"middle\">geometric-mean MSE_W</text>\n";

    int legend_row = 0;
    int color = 0;
    bool tidanse_drawn = false;
    for (const Curve& c : curves) {
      const bool baseline = c.algorithm != "TIDANSEplus";
      if (!baseline && c.pruning != panels[p]) continue;
      if (c.algorithm == "TIDANSE") {
        if (tidanse_drawn) continue;  // identical for every C
        tidanse_drawn = true;
      }
      std::string stroke = kPalette[color++ % 10];
      std::string dash;
      if (c.algorithm == "DANSE") stroke = "black";
      if (c.algorithm == "TIDANSE") {
        stroke = "#555555";
        dash = " stroke-dasharray=\"6,4\"";
      }
      std::string d;
      for (std::size_t i = 0; i < c.values.size(); ++i) {
        if (!std::isfinite(c.values[i])) continue;
        d += (d.empty() ? "M" : " L") + coord(sx(static_cast<double>(i))) + " " +
             coord(sy(c.values[i] > 0.0 ? c.values[i] : std::pow(10.0, dec_lo)));
      }
      svg << "<path class=\"curve\" data-algorithm=\"" << xml_escape(c.algorithm)
          << "\" data-c=\"" << num(c.c_target) << "\" fill=\"none\" stroke=\"" << stroke
          << "\" stroke-width=\"1.5\"" << dash << " d=\"" << d << "\"/>\n";
      const double ly = y0 + 10 + 18.0 * legend_row++;
      const double lx = left + plot_w + 15;
      svg << "<line x1=\"" << coord(lx) << "\" y1=\"" << coord(ly) << "\" x2=\"" << coord(lx + 24)
          << "\" y2=\"" << coord(ly) << "\" stroke=\"" << stroke << "\" stroke-width=\"2\"" << dash
          << "/>\n"
          << "<text class=\"legend\" x=\"" << coord(lx + 30) << "\" y=\"" << coord(ly + 4) << "\">"
          << xml_escape(curve_label(c)) << "</text>\n";
    }
    svg << "</g>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

void emit_convergence_plot(const std::vector<AggregateRow>& aggregates,
                           const std::filesystem::path& path) {
  write_text(path, convergence_plot_svg(aggregates));
}

}  // namespace wasn
