#include "commlab/report.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include "json.hpp"

#include "commlab/error.hpp"
#include "commlab/instance_io.hpp"

namespace commlab {

namespace {

using Cell = std::optional<std::string>;  // nullopt = missing

template <class T>
Cell num(const std::optional<T>& v) {
  if (!v) return std::nullopt;
  if constexpr (std::is_floating_point_v<T>) return format_double(*v);
  else return std::to_string(*v);
}

std::string sizes_text(const std::vector<std::size_t>& sizes) {
  std::string s;
  for (std::size_t i = 0; i < sizes.size(); ++i) s += (i ? "x" : "") + std::to_string(sizes[i]);
  return s;
}

std::vector<Cell> cells(const ReportRow& r) {
  return {r.instance_id,
          num(r.seed),
          sizes_text(r.sizes),
          num(r.rho_global),
          num(r.rho_box_max),
          num(r.h_t),
          num(r.i_xy),
          num(r.i_xy_given_t),
          num(r.margin_main),
          num(r.ic),
          num(r.margin_ic),
          num(r.cover_exact),
          num(r.cover_greedy),
          num(r.fooling_best),
          num(r.rank_rational),
          num(r.rank_gf2),
          num(r.color_count),
          r.status,
          format_double(r.runtime_ms)};
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
  return q + "\"";
}

}  // namespace

const std::vector<std::string>& report_columns() {
  static const std::vector<std::string> cols{
      "instance_id", "seed",          "sizes",        "rho_global", "rho_box_max",
      "H_T",         "I_XY",          "I_XY_given_T", "margin_main", "ic",
      "margin_ic",   "cover_exact",   "cover_greedy", "fooling_best", "rank_rational",
      "rank_gf2",    "color_count",   "status",       "runtime_ms"};
  return cols;
}

ReportFormat parse_report_format(const std::string& text) {
  if (text == "csv") return ReportFormat::csv;
  if (text == "json") return ReportFormat::json;
  throw InvalidInput("unknown report format '" + text + "'");
}

void write_csv(std::ostream& out, const std::vector<ReportRow>& rows) {
  const auto& cols = report_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
  out << "\n";
  for (const auto& r : rows) {
    const auto cs = cells(r);
    for (std::size_t i = 0; i < cs.size(); ++i) out << (i ? "," : "") << (cs[i] ? csv_field(*cs[i]) : "");
    out << "\n";
  }
}

void write_json(std::ostream& out, const std::vector<ReportRow>& rows) {
  // Rows are written by hand to keep the column order and number format.
  const auto& cols = report_columns();
  out << "[";
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const auto& r = rows[k];
    const auto cs = cells(r);
    out << (k ? ",\n  {" : "\n  {");
    for (std::size_t i = 0; i < cols.size(); ++i) {
      out << (i ? ", " : "") << nlohmann::json(cols[i]).dump() << ": ";
      if (!cs[i]) {
        out << "null";
      } else if (cols[i] == "instance_id" || cols[i] == "status") {
        out << nlohmann::json(*cs[i]).dump();
      } else if (cols[i] == "sizes") {
        out << nlohmann::json(r.sizes).dump();
      } else {
        out << *cs[i];
      }
    }
    out << "}";
  }
  out << (rows.empty() ? "]\n" : "\n]\n");
}

void write_report(std::ostream& out, const std::vector<ReportRow>& rows, ReportFormat format) {
  if (format == ReportFormat::csv) write_csv(out, rows);
  else write_json(out, rows);
}

void write_report(const std::filesystem::path& path, const std::vector<ReportRow>& rows, ReportFormat format) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidInput(path.string() + ": cannot write report");
  write_report(out, rows, format);
  if (!out) throw InvalidInput(path.string() + ": write failed");
}

Histogram histogram(const std::vector<double>& values, std::size_t bins) {
  if (bins == 0) throw InvalidInput("histogram needs at least one bin");
  Histogram h;
  h.counts.assign(bins, 0);
  if (values.empty()) return h;
  h.lo = *std::min_element(values.begin(), values.end());
  h.hi = *std::max_element(values.begin(), values.end());
  if (h.hi == h.lo) {
    h.lo -= 0.5;
    h.hi += 0.5;
  }
  const double width = (h.hi - h.lo) / static_cast<double>(bins);
  for (double v : values) {
    auto b = static_cast<std::size_t>((v - h.lo) / width);
    h.counts[std::min(b, bins - 1)]++;
  }
  return h;
}

std::string histogram_svg(const Histogram& h, const std::string& title) {
  const double w = 640, ht = 320, margin = 40;
  const std::size_t top = h.counts.empty() ? 0 : *std::max_element(h.counts.begin(), h.counts.end());
  const double bw = h.counts.empty() ? 0 : (w - 2 * margin) / static_cast<double>(h.counts.size());
  std::ostringstream s;
  char buf[256];
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"320\" viewBox=\"0 0 640 320\">\n";
  s << "<title>" << title << "</title>\n";
  s << "<rect x=\"0\" y=\"0\" width=\"640\" height=\"320\" fill=\"white\"/>\n";
  s << "<text x=\"320\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">" << title << "</text>\n";
  for (std::size_t i = 0; i < h.counts.size(); ++i) {
    const double bh = top ? (ht - 2 * margin) * static_cast<double>(h.counts[i]) / static_cast<double>(top) : 0.0;
    std::snprintf(buf, sizeof buf,
                  "<rect class=\"bin\" x=\"%.2f\" y=\"%.2f\" width=\"%.2f\" height=\"%.2f\" fill=\"steelblue\" "
                  "data-count=\"%zu\"/>\n",
                  margin + bw * static_cast<double>(i), ht - margin - bh, bw, bh, h.counts[i]);
    s << buf;
  }
  s << "<line x1=\"40\" y1=\"280\" x2=\"600\" y2=\"280\" stroke=\"black\"/>\n";
  s << "<text x=\"40\" y=\"300\" font-size=\"12\">" << format_double(h.lo) << "</text>\n";
  s << "<text x=\"600\" y=\"300\" text-anchor=\"end\" font-size=\"12\">" << format_double(h.hi) << "</text>\n";
  s << "</svg>\n";
  return s.str();
}

void write_margin_plot(const std::filesystem::path& path, const std::vector<ReportRow>& rows) {
  std::vector<double> v;
  for (const auto& r : rows)
    if (r.margin_main) v.push_back(*r.margin_main);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidInput(path.string() + ": cannot write plot");
  out << histogram_svg(histogram(v), "margin_main");
  if (!out) throw InvalidInput(path.string() + ": write failed");
}

}  // namespace commlab
