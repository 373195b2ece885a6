#include "qbat/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "qbat/errors.hpp"

namespace qbat {

namespace {

constexpr const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                   "#9467bd", "#8c564b", "#17becf", "#7f7f7f"};

int column_index(const CsvDocument& doc, const std::string& name) {
  for (std::size_t i = 0; i < doc.columns.size(); ++i) {
    if (doc.columns[i] == name) return static_cast<int>(i);
  }
  throw ConfigError("plot: no column named '" + name + "'");
}

}  // namespace

std::string render_plot_svg(const CsvDocument& doc, const PlotRequest& req) {
  std::vector<std::string> ys = req.y_columns;
  if (ys.empty()) ys = {"delta_E_over_EB", "ergotropy_over_EB"};
  const int xi = column_index(doc, req.x_column);
  std::vector<int> yi;
  for (const auto& name : ys) yi.push_back(column_index(doc, name));

  std::vector<double> xs;
  std::vector<std::vector<double>> series(yi.size());
  for (const auto& row : doc.rows) {
    bool ok = true;
    for (int idx : yi) {
      if (row[idx].empty()) ok = false;
    }
    if (!ok || row[xi].empty()) continue;
    xs.push_back(std::stod(row[xi]));
    for (std::size_t s = 0; s < yi.size(); ++s) {
      series[s].push_back(std::stod(row[yi[s]]));
    }
  }
  if (xs.size() < 2) throw ConfigError("plot: need at least two data rows");

  double xmin = xs.front(), xmax = xs.front();
  for (double v : xs) {
    xmin = std::min(xmin, v);
    xmax = std::max(xmax, v);
  }
  double ymin = std::numeric_limits<double>::infinity(), ymax = -ymin;
  for (const auto& s : series) {
    for (double v : s) {
      ymin = std::min(ymin, v);
      ymax = std::max(ymax, v);
    }
  }
  if (xmax == xmin) xmax = xmin + 1.0;
  if (ymax == ymin) ymax = ymin + 1.0;

  const double w = 900, h = 560, ml = 80, mr = 160, mt = 30, mb = 60;
  auto px = [&](double x) {
    return ml + (x - xmin) / (xmax - xmin) * (w - ml - mr);
  };
  auto py = [&](double y) {
    return h - mb - (y - ymin) / (ymax - ymin) * (h - mt - mb);
  };

  std::ostringstream svg;
  svg << "<svg xmlns='http://www.w3.org/2000/svg' width='" << w
      << "' height='" << h << "' viewBox='0 0 " << w << " " << h << "'>\n";
  svg << "<rect width='100%' height='100%' fill='white'/>\n";
  svg << "<line x1='" << ml << "' y1='" << h - mb << "' x2='" << w - mr
      << "' y2='" << h - mb << "' stroke='black'/>\n";
  svg << "<line x1='" << ml << "' y1='" << mt << "' x2='" << ml << "' y2='"
      << h - mb << "' stroke='black'/>\n";
  for (int tick = 0; tick <= 5; ++tick) {
    const double fx = xmin + (xmax - xmin) * tick / 5.0;
    const double fy = ymin + (ymax - ymin) * tick / 5.0;
    svg << "<text x='" << px(fx) << "' y='" << h - mb + 22
        << "' font-size='13' text-anchor='middle'>" << fx << "</text>\n";
    svg << "<text x='" << ml - 8 << "' y='" << py(fy) + 4
        << "' font-size='13' text-anchor='end'>" << fy << "</text>\n";
  }
  svg << "<text x='" << (ml + w - mr) / 2 << "' y='" << h - 16
      << "' font-size='15' text-anchor='middle'>" << req.x_column
      << "</text>\n";
  for (std::size_t s = 0; s < series.size(); ++s) {
    const char* color = kColors[s % 8];
    svg << "<polyline fill='none' stroke='" << color
        << "' stroke-width='1.6' points='";
    for (std::size_t i = 0; i < xs.size(); ++i) {
      svg << px(xs[i]) << "," << py(series[s][i]) << " ";
    }
    svg << "'/>\n";
    svg << "<text x='" << w - mr + 10 << "' y='" << mt + 18 * (s + 1)
        << "' font-size='13' fill='" << color << "'>" << ys[s] << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

std::string plot_csv_file(const PlotRequest& req) {
  const CsvDocument doc = read_csv_file(req.csv_path);
  std::string out = req.out_path;
  if (out.empty()) {
    out = req.csv_path;
    const auto dot = out.rfind('.');
    if (dot != std::string::npos) out.resize(dot);
    out += ".svg";
  }
  std::ofstream file(out, std::ios::binary);
  if (!file) throw NumericError("plot: cannot open " + out);
  file << render_plot_svg(doc, req);
  return out;
}

}  // namespace qbat
