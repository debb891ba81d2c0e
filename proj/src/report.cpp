#include "levyshrink/report.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <fmt/format.h>

namespace levyshrink {
namespace {

std::string csv_field(const std::string& field) {
  if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
  std::string quoted = "\"";
  for (char ch : field) {
    if (ch == '"') quoted += '"';
    quoted += ch;
  }
  return quoted + '"';
}

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char ch : s) {
    switch (ch) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += ch;
    }
  }
  return out;
}

}  // namespace

void Table::add_row(std::vector<std::string> row) {
  if (row.size() != columns.size()) {
    throw std::logic_error("Table::add_row: expected " + std::to_string(columns.size()) +
                           " fields, got " + std::to_string(row.size()));
  }
  rows.push_back(std::move(row));
}

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return fmt::format("{:.12g}", x == 0.0 ? 0.0 : x);  // no "-0"
}

std::string format_vector(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ';';
    out += format_number(v[i]);
  }
  return out;
}

std::string to_csv(const Table& table) {
  std::string out;
  for (const auto& [key, value] : table.config) out += "# " + key + "=" + value + "\r\n";
  auto line = [&out](const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i) out += ',';
      out += csv_field(fields[i]);
    }
    out += "\r\n";
  };
  line(table.columns);
  for (const auto& row : table.rows) line(row);
  return out;
}

std::string line_chart_svg(const std::string& title, const std::string& x_label,
                           const std::string& y_label, const std::vector<Series>& series) {
  constexpr double kWidth = 640, kHeight = 400;
  constexpr double kLeft = 70, kRight = 150, kTop = 40, kBottom = 60;
  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
  double ymin = 0.0, ymax = -std::numeric_limits<double>::infinity();
  for (const auto& s : series) {
    for (const auto& [x, y] : s.points) {
      xmin = std::min(xmin, x);
      xmax = std::max(xmax, x);
      ymin = std::min(ymin, y);
      ymax = std::max(ymax, y);
    }
  }
  if (!(xmax > xmin)) xmax = xmin + 1.0;
  if (!(ymax > ymin)) ymax = ymin + 1.0;
  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;
  auto sx = [&](double x) { return kLeft + (x - xmin) / (xmax - xmin) * plot_w; };
  auto sy = [&](double y) { return kTop + (1.0 - (y - ymin) / (ymax - ymin)) * plot_h; };

  std::ostringstream svg;
  svg << fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{1}\" viewBox=\"0 0 {0} {1}\">\n",
      kWidth, kHeight);
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << fmt::format("<text x=\"{}\" y=\"24\" font-family=\"sans-serif\" font-size=\"16\" text-anchor=\"middle\">{}</text>\n",
                     kLeft + plot_w / 2, xml_escape(title));
  svg << fmt::format("<line x1=\"{0}\" y1=\"{1}\" x2=\"{2}\" y2=\"{1}\" stroke=\"black\"/>\n", kLeft,
                     kTop + plot_h, kLeft + plot_w);
  svg << fmt::format("<line x1=\"{0}\" y1=\"{1}\" x2=\"{0}\" y2=\"{2}\" stroke=\"black\"/>\n", kLeft, kTop,
                     kTop + plot_h);
  for (int k = 0; k <= 5; ++k) {
    const double xv = xmin + (xmax - xmin) * k / 5.0;
    const double yv = ymin + (ymax - ymin) * k / 5.0;
    svg << fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\">{:.3g}</text>\n",
                       sx(xv), kTop + plot_h + 16, xv);
    svg << fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">{:.3g}</text>\n",
                       kLeft - 6, sy(yv) + 4, yv);
  }
  svg << fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\">{}</text>\n",
                     kLeft + plot_w / 2, kHeight - 20, xml_escape(x_label));
  svg << fmt::format("<text x=\"18\" y=\"{:.1f}\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\" transform=\"rotate(-90 18 {:.1f})\">{}</text>\n",
                     kTop + plot_h / 2, kTop + plot_h / 2, xml_escape(y_label));
  for (std::size_t i = 0; i < series.size(); ++i) {
    const auto& s = series[i];
    svg << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"2\" points=\"";
    for (std::size_t k = 0; k < s.points.size(); ++k) {
      if (k) svg << ' ';
      svg << fmt::format("{:.2f},{:.2f}", sx(s.points[k].first), sy(s.points[k].second));
    }
    svg << "\"/>\n";
    const double ly = kTop + 16 + 20 * static_cast<double>(i);
    svg << fmt::format("<line x1=\"{0}\" y1=\"{1}\" x2=\"{2}\" y2=\"{1}\" stroke=\"{3}\" stroke-width=\"2\"/>\n",
                       kWidth - kRight + 15, ly, kWidth - kRight + 40, s.color);
    svg << fmt::format("<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"12\">{}</text>\n",
                       kWidth - kRight + 46, ly + 4, xml_escape(s.label));
  }
  svg << "</svg>\n";
  return svg.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << content;
  if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

}  // namespace levyshrink
