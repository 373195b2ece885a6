#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qbat/config.hpp"
#include "qbat/csv.hpp"
#include "qbat/dynamics.hpp"
#include "qbat/protocol.hpp"

namespace qbat {

struct EngineRun {
  Engine engine = Engine::Effective;
  Trajectory trajectory;        // annotated
  QuenchSchedule schedule;      // single segment when no quench is requested
  std::string csv_path;
};

struct RunResult {
  std::vector<EngineRun> runs;  // one per engine
};

// Computes the trajectory for one engine without touching the filesystem.
EngineRun compute_engine_run(const ExperimentConfig& cfg, Engine engine);

// Runs the configured engines and writes <prefix>_<engine>.csv under
// [output].dir. Deterministic: identical config and tolerances give
// byte-identical files.
RunResult run_experiment(const ExperimentConfig& cfg);

CsvDocument trajectory_csv(const ExperimentConfig& cfg, Engine engine,
                           const Trajectory& traj);

struct SweepRow {
  double value = 0.0;
  double steady_delta_e_over_eb = 0.0;
  double steady_ergotropy_over_eb = 0.0;
  std::optional<double> saturation_gamma_eg_t;  // empty if never crossed
};

// Valid sweep axes: g, Omega, beta, tau, n_opt.
ExperimentConfig apply_axis(const ExperimentConfig& base,
                            const std::string& axis, double value);

// Runs one simulation per value on a worker pool (workers <= 0 uses the
// hardware concurrency); rows come back in input order regardless of the
// worker count. Summaries use the effective engine unless the config pins
// engine = full.
std::vector<SweepRow> run_sweep(const ExperimentConfig& base,
                                const std::string& axis,
                                std::span<const double> values, int workers);

// run_sweep plus the summary CSV at <prefix>_sweep_<axis>.csv.
std::vector<SweepRow> run_sweep_to_csv(const ExperimentConfig& base,
                                       const std::string& axis,
                                       std::span<const double> values,
                                       int workers, std::string* csv_path);

// Bundled figure studies: fig2..fig9. Writes the data CSVs plus a
// <fig>_meta.txt recording every parameter of the preset. Returns the list
// of files written.
std::vector<std::string> reproduce_figure(const std::string& figure_id,
                                          const std::string& out_dir);

std::vector<std::string> known_figures();

}  // namespace qbat
