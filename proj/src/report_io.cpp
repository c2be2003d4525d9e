#include <greedylab/experiments.hpp>

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

namespace greedylab {

namespace {

std::string format_value(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char ch : s) {
    switch (ch) {
    case '&': out += "&amp;"; break;
    case '<': out += "&lt;"; break;
    case '>': out += "&gt;"; break;
    case '"': out += "&quot;"; break;
    default: out += ch;
    }
  }
  return out;
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(path, std::string("cannot open for writing: ") + std::strerror(errno));
  out << contents;
  out.flush();
  if (!out) throw IoError(path, "write failed");
}

// Decade-aligned log10 range covering the positive values.
std::pair<double, double> decade_range(const std::vector<double>& values) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (double v : values) {
    if (v > 0.0 && std::isfinite(v)) {
      lo = std::min(lo, std::log10(v));
      hi = std::max(hi, std::log10(v));
    }
  }
  if (!std::isfinite(lo)) return {0.0, 1.0};
  lo = std::floor(lo);
  hi = std::ceil(hi);
  if (hi <= lo) hi = lo + 1.0;
  return {lo, hi};
}

} // namespace

std::string format_csv(const Table& table) {
  std::string out;
  for (std::size_t j = 0; j < table.header.size(); ++j) {
    if (j) out += ',';
    out += table.header[j];
  }
  out += '\n';
  for (const auto& row : table.rows) {
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (j) out += ',';
      out += format_value(row[j]);
    }
    out += '\n';
  }
  return out;
}

Table parse_csv(const std::string& text) {
  Table t;
  std::istringstream in(text);
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream fields(line);
    while (std::getline(fields, cell, ',')) cells.push_back(cell);
    if (first) {
      t.header = std::move(cells);
      first = false;
      continue;
    }
    std::vector<double> row;
    for (const auto& c : cells) {
      char* end = nullptr;
      const double v = std::strtod(c.c_str(), &end);
      if (end == c.c_str()) throw ParameterError("parse_csv: not a number: '" + c + "'");
      row.push_back(v);
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

std::string render_svg(const RunReport& report) {
  constexpr double width = 800, height = 600;
  constexpr double left = 90, right = 30, top = 50, bottom = 70;
  const double plot_w = width - left - right;
  const double plot_h = height - top - bottom;

  std::vector<double> xs, ys;
  for (const auto& row : report.table.rows) {
    xs.push_back(row.at(static_cast<std::size_t>(report.plot.x_column)));
    ys.push_back(row.at(static_cast<std::size_t>(report.plot.y_column)));
  }
  const auto [x0, x1] = decade_range(xs);
  const auto [y0, y1] = decade_range(ys);
  auto px = [&](double lx) { return left + (lx - x0) / (x1 - x0) * plot_w; };
  auto py = [&](double ly) { return top + (y1 - ly) / (y1 - y0) * plot_h; };

  std::ostringstream svg;
  svg.precision(6);
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"800\" height=\"600\" "
         "viewBox=\"0 0 800 600\">\n"
      << "<rect x=\"0\" y=\"0\" width=\"800\" height=\"600\" fill=\"white\"/>\n"
      << "<text x=\"400\" y=\"28\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"16\">"
      << xml_escape(report.plot.title) << "</text>\n";

  svg << "<g id=\"axes\" stroke=\"black\" fill=\"none\">\n"
      << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << plot_w << "\" height=\"" << plot_h << "\"/>\n"
      << "</g>\n<g id=\"ticks\" font-family=\"sans-serif\" font-size=\"12\">\n";
  for (int d = static_cast<int>(x0); d <= static_cast<int>(x1); ++d) {
    const double x = px(d);
    svg << "<line x1=\"" << x << "\" y1=\"" << top << "\" x2=\"" << x << "\" y2=\"" << top + plot_h
        << "\" stroke=\"#dddddd\"/>\n"
        << "<text x=\"" << x << "\" y=\"" << top + plot_h + 18 << "\" text-anchor=\"middle\">1e" << d << "</text>\n";
  }
  for (int d = static_cast<int>(y0); d <= static_cast<int>(y1); ++d) {
    const double y = py(d);
    svg << "<line x1=\"" << left << "\" y1=\"" << y << "\" x2=\"" << left + plot_w << "\" y2=\"" << y
        << "\" stroke=\"#dddddd\"/>\n"
        << "<text x=\"" << left - 8 << "\" y=\"" << y + 4 << "\" text-anchor=\"end\">1e" << d << "</text>\n";
  }
  svg << "</g>\n"
      << "<text x=\"" << left + plot_w / 2 << "\" y=\"" << height - 20
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\">" << xml_escape(report.plot.x_label)
      << "</text>\n"
      << "<text x=\"20\" y=\"" << top + plot_h / 2 << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
      << "font-size=\"14\" transform=\"rotate(-90 20 " << top + plot_h / 2 << ")\">" << xml_escape(report.plot.y_label)
      << "</text>\n";

  svg << "<g id=\"data\" fill=\"#1f77b4\">\n";
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const bool plottable = xs[i] > 0.0 && ys[i] > 0.0 && std::isfinite(xs[i]) && std::isfinite(ys[i]);
    const double cx = plottable ? px(std::log10(xs[i])) : left;
    const double cy = plottable ? py(std::log10(ys[i])) : top + plot_h;
    svg << "<circle cx=\"" << cx << "\" cy=\"" << cy << "\" r=\"3\"" << (plottable ? "" : " class=\"clipped\"")
        << "><title>" << format_value(xs[i]) << "," << format_value(ys[i]) << "</title></circle>\n";
  }
  svg << "</g>\n";

  if (report.rate) {
    const RateEstimate& rate = *report.rate;
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (double x : xs)
      if (x > 0.0) {
        lo = std::min(lo, x);
        hi = std::max(hi, x);
      }
    auto fitted = [&](double x) { return (rate.intercept + rate.slope * std::log(x)) / std::log(10.0); };
    svg << "<line id=\"fit\" x1=\"" << px(std::log10(lo)) << "\" y1=\"" << py(fitted(lo)) << "\" x2=\""
        << px(std::log10(hi)) << "\" y2=\"" << py(fitted(hi)) << "\" stroke=\"#d62728\" stroke-width=\"2\"/>\n"
        << "<text x=\"" << left + plot_w - 10 << "\" y=\"" << top + 24
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"14\" fill=\"#d62728\">estimated order "
        << std::fixed << std::setprecision(3) << rate.order() << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

void emit_csv(const RunReport& report, const std::string& path) { write_file(path, format_csv(report.table)); }

void emit_svg(const RunReport& report, const std::string& path) { write_file(path, render_svg(report)); }

} // namespace greedylab
