// qbat: dissipative qutrit-mediated quantum-battery charging simulator.
//
// Subcommands: run, sweep, reproduce, validate, plot.
// Exit codes: 0 ok, 1 config error, 2 runtime/integration error,
// 3 validation failure.

#include <CLI11.hpp>
#include <iostream>

#include "qbat/experiment.hpp"
#include "qbat/svg_plot.hpp"
#include "qbat/validate.hpp"

namespace {

int dispatch(int argc, char** argv) {
  CLI::App app{"dissipative qutrit-mediated quantum-battery charging"};
  app.require_subcommand(1);

  std::string config_path;
  auto* run_cmd = app.add_subcommand("run", "run one experiment config");
  run_cmd->add_option("config", config_path, "config file")->required();

  std::string sweep_config, sweep_axis;
  std::vector<double> sweep_values;
  int sweep_workers = 0;
  auto* sweep_cmd =
      app.add_subcommand("sweep", "sweep one scalar parameter");
  sweep_cmd->add_option("config", sweep_config, "config template")->required();
  sweep_cmd->add_option("--axis", sweep_axis, "g | Omega | beta | tau | n_opt")
      ->required();
  sweep_cmd->add_option("--values", sweep_values, "axis values")
      ->required()
      ->delimiter(',');
  sweep_cmd->add_option("--workers", sweep_workers,
                        "worker threads (default: hardware)");

  std::string figure_id, figure_dir = "out";
  auto* repro_cmd =
      app.add_subcommand("reproduce", "emit the data of a bundled figure study");
  repro_cmd->add_option("figure", figure_id, "fig2 .. fig9")->required();
  repro_cmd->add_option("--out", figure_dir, "output directory");

  auto* validate_cmd =
      app.add_subcommand("validate", "run the oracle/invariant battery");

  std::vector<std::string> plot_csvs;
  std::string plot_x = "gamma_eg_t";
  std::vector<std::string> plot_ys;
  auto* plot_cmd = app.add_subcommand("plot", "render CSVs as SVG charts");
  plot_cmd->add_option("csv", plot_csvs, "csv files")->required();
  plot_cmd->add_option("--x", plot_x, "x column");
  plot_cmd->add_option("--y", plot_ys, "y columns")->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  if (run_cmd->parsed()) {
    const auto cfg = qbat::load_config_file(config_path);
    const auto result = qbat::run_experiment(cfg);
    for (const auto& r : result.runs) {
      std::cout << "wrote " << r.csv_path << " (" << r.trajectory.size()
                << " samples)\n";
      for (std::size_t i = 1; i < r.schedule.segments.size(); ++i) {
        const auto& seg = r.schedule.segments[i];
        std::cout << "  quench at gamma_eg*t=" << seg.start_time * cfg.gamma_eg
                  << " -> g=" << seg.g << "\n";
      }
    }
    return 0;
  }
  if (sweep_cmd->parsed()) {
    const auto cfg = qbat::load_config_file(sweep_config);
    std::string csv_path;
    qbat::run_sweep_to_csv(cfg, sweep_axis, sweep_values, sweep_workers,
                           &csv_path);
    std::cout << "wrote " << csv_path << " (" << sweep_values.size()
              << " rows)\n";
    return 0;
  }
  if (repro_cmd->parsed()) {
    const auto files = qbat::reproduce_figure(figure_id, figure_dir);
    for (const auto& f : files) std::cout << "wrote " << f << "\n";
    return 0;
  }
  if (validate_cmd->parsed()) {
    const auto report = qbat::run_validation();
    std::cout << report.to_text();
    return report.all_pass() ? 0 : 3;
  }
  if (plot_cmd->parsed()) {
    for (const auto& csv : plot_csvs) {
      qbat::PlotRequest req;
      req.csv_path = csv;
      req.x_column = plot_x;
      req.y_columns = plot_ys;
      std::cout << "wrote " << qbat::plot_csv_file(req) << "\n";
    }
    return 0;
  }
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return dispatch(argc, argv);
  } catch (const qbat::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
