#pragma once

// One result row per analysed instance, written as CSV or JSON, plus a
// static SVG histogram of the main margin.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace commlab {

struct ReportRow {
  std::string instance_id;
  std::optional<std::uint64_t> seed;
  std::vector<std::size_t> sizes;
  std::optional<std::size_t> rho_global;
  std::optional<std::size_t> rho_box_max;
  std::optional<double> h_t;
  std::optional<double> i_xy;
  std::optional<double> i_xy_given_t;
  std::optional<double> margin_main;
  std::optional<double> ic;
  std::optional<double> margin_ic;
  std::optional<std::size_t> cover_exact;
  std::optional<std::size_t> cover_greedy;
  std::optional<std::size_t> fooling_best;
  std::optional<std::size_t> rank_rational;
  std::optional<std::size_t> rank_gf2;
  std::optional<std::size_t> color_count;
  std::string status = "ok";
  double runtime_ms = 0.0;
};

// Column names in output order.
const std::vector<std::string>& report_columns();

enum class ReportFormat { csv, json };
ReportFormat parse_report_format(const std::string& text);

// Missing values are empty in CSV and null in JSON.
void write_csv(std::ostream& out, const std::vector<ReportRow>& rows);
void write_json(std::ostream& out, const std::vector<ReportRow>& rows);
void write_report(std::ostream& out, const std::vector<ReportRow>& rows, ReportFormat format);
// Throws InvalidInput when the file cannot be written.
void write_report(const std::filesystem::path& path, const std::vector<ReportRow>& rows, ReportFormat format);

struct Histogram {
  double lo = 0.0;
  double hi = 0.0;
  std::vector<std::size_t> counts;
};

// Equal-width bins over [min, max]; the top edge falls in the last bin.
Histogram histogram(const std::vector<double>& values, std::size_t bins = 20);
std::string histogram_svg(const Histogram& h, const std::string& title);
// Histogram of margin_main over the rows that have one.
void write_margin_plot(const std::filesystem::path& path, const std::vector<ReportRow>& rows);

}  // namespace commlab
