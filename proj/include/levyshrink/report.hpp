#pragma once

#include <string>
#include <utility>
#include <vector>

namespace levyshrink {

/// A result table: config echo, header, rows, and the overall verdict.
struct Table {
  std::vector<std::pair<std::string, std::string>> config;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
  bool pass = true;

  void echo(std::string key, std::string value) { config.emplace_back(std::move(key), std::move(value)); }
  void add_row(std::vector<std::string> row);
};

/// Twelve significant digits, '.' decimal separator.
std::string format_number(double x);
std::string format_vector(const std::vector<double>& v);
inline std::string verdict(bool pass) { return pass ? "PASS" : "FAIL"; }

/// '#'-prefixed "key=value" lines, then the header and rows, RFC-4180 quoting.
std::string to_csv(const Table& table);

struct Series {
  std::string label;
  std::string color;
  std::vector<std::pair<double, double>> points;
};

/// Polyline chart on a fixed 640x400 viewport with axes and a legend.
std::string line_chart_svg(const std::string& title, const std::string& x_label,
                           const std::string& y_label, const std::vector<Series>& series);

/// Writes `content` to `path`; std::runtime_error naming the path on failure.
void write_file(const std::string& path, const std::string& content);

}  // namespace levyshrink
