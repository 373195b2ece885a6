#pragma once

#include <string>
#include <vector>

#include "qbat/csv.hpp"

namespace qbat {

// Minimal static line chart; the CSVs are the data contract, plots are a
// convenience for eyeballing them headlessly.
struct PlotRequest {
  std::string csv_path;
  std::string x_column = "gamma_eg_t";
  std::vector<std::string> y_columns;  // empty = delta_E + ergotropy
  std::string out_path;                // empty = csv path with .svg
};

std::string render_plot_svg(const CsvDocument& doc, const PlotRequest& req);

// Returns the path written.
std::string plot_csv_file(const PlotRequest& req);

}  // namespace qbat
