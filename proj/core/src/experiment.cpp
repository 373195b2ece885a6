#include "qbat/experiment.hpp"

#include <atomic>
#include <cmath>
#include <filesystem>
#include <sstream>
#include <thread>

#include "qbat/observables.hpp"

namespace qbat {

namespace {

std::vector<std::string> config_meta_lines(const ExperimentConfig& cfg,
                                           Engine engine) {
  std::vector<std::string> meta;
  meta.push_back("qbat csv v1");
  {
    std::ostringstream h;
    h << "config_hash=" << std::hex << config_hash(cfg);
    meta.push_back(h.str());
  }
  meta.push_back("engine=" + to_string(engine));
  std::istringstream cfg_text(serialize_config(cfg));
  std::string line, section;
  while (std::getline(cfg_text, line)) {
    if (line.empty()) continue;
    if (line.front() == '[') {
      section = line.substr(1, line.size() - 2);
      continue;
    }
    meta.push_back(section + "." + line);
  }
  return meta;
}

}  // namespace

EngineRun compute_engine_run(const ExperimentConfig& cfg, Engine engine) {
  if (engine == Engine::Both) {
    throw ConfigError("compute_engine_run: engine must be full or effective");
  }
  const BatteryModel b = cfg.battery();
  const ChargerParams c = cfg.charger();
  const DensityMatrix rho0 = cfg.initial_state();
  const std::vector<double> grid = cfg.time_grid();

  EngineRun run;
  run.engine = engine;
  if (!cfg.quench_times.empty()) {
    QuenchRun q = run_quenched(b, c, rho0, cfg.quench_times_absolute(), grid,
                               cfg.tol, engine == Engine::Full);
    run.trajectory = std::move(q.trajectory);
    run.schedule = std::move(q.schedule);
  } else {
    if (engine == Engine::Full) {
      run.trajectory = propagate_composite(b, c, rho0, grid, cfg.tol);
    } else {
      PropagateOptions opt;
      opt.tol = cfg.tol;
      run.trajectory = propagate(effective_battery_generator(b, c), rho0,
                                 grid, opt);
    }
    run.schedule.segments.push_back({0.0, c.g});
  }
  annotate_observables(run.trajectory, b);
  return run;
}

CsvDocument trajectory_csv(const ExperimentConfig& cfg, Engine engine,
                           const Trajectory& traj) {
  const BatteryModel b = cfg.battery();
  CsvDocument doc;
  doc.meta = config_meta_lines(cfg, engine);
  doc.columns = {"t", "gamma_eg_t", "delta_E_over_EB", "ergotropy_over_EB"};
  for (int n = 0; n < b.dim; ++n) {
    doc.columns.push_back("p_" + std::to_string(n));
  }
  doc.columns.push_back("most_populated_level");
  doc.columns.push_back("qutrit_ground_population");
  const bool full = !traj.qutrit_ground_population.empty();
  for (std::size_t i = 0; i < traj.size(); ++i) {
    std::vector<std::string> row;
    row.reserve(doc.columns.size());
    row.push_back(format_sig12(traj.times[i]));
    row.push_back(format_sig12(traj.times[i] * cfg.gamma_eg));
    row.push_back(format_sig12(traj.stored_energy[i] / cfg.e_b));
    row.push_back(format_sig12(traj.ergotropy[i] / cfg.e_b));
    for (int n = 0; n < b.dim; ++n) {
      row.push_back(format_sig12(traj.populations[i][n]));
    }
    row.push_back(std::to_string(traj.most_populated[i]));
    row.push_back(full ? format_sig12(traj.qutrit_ground_population[i]) : "");
    doc.rows.push_back(std::move(row));
  }
  return doc;
}

RunResult run_experiment(const ExperimentConfig& cfg) {
  std::vector<Engine> engines;
  if (cfg.engine == Engine::Both) {
    engines = {Engine::Full, Engine::Effective};
  } else {
    engines = {cfg.engine};
  }
  RunResult result;
  for (Engine engine : engines) {
    EngineRun run = compute_engine_run(cfg, engine);
    const std::filesystem::path path =
        std::filesystem::path(cfg.out_dir) /
        (cfg.prefix + "_" + to_string(engine) + ".csv");
    write_csv_file(path.string(), trajectory_csv(cfg, engine, run.trajectory));
    run.csv_path = path.string();
    result.runs.push_back(std::move(run));
  }
  return result;
}

ExperimentConfig apply_axis(const ExperimentConfig& base,
                            const std::string& axis, double value) {
  ExperimentConfig cfg = base;
  if (axis == "g") {
    std::ostringstream v;
    v.precision(17);
    v << value;
    cfg.g_spec = v.str();
  } else if (axis == "Omega") {
    cfg.Omega = value;
  } else if (axis == "beta") {
    cfg.thermal = true;
    cfg.beta = value;
  } else if (axis == "tau") {
    cfg.quench_times = {value};
  } else if (axis == "n_opt") {
    cfg.g_spec = "optimal:" + std::to_string(static_cast<int>(std::llround(value)));
  } else {
    throw ConfigError("sweep axis must be one of: g, Omega, beta, tau, n_opt");
  }
  // Re-validate and re-resolve the coupling with the modified fields.
  return parse_config(serialize_config(cfg));
}

std::vector<SweepRow> run_sweep(const ExperimentConfig& base,
                                const std::string& axis,
                                std::span<const double> values, int workers) {
  apply_axis(base, axis, values.empty() ? 0.0 : values[0]);  // axis check
  std::vector<SweepRow> rows(values.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto work = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= values.size()) return;
      try {
        ExperimentConfig cfg = apply_axis(base, axis, values[i]);
        const Engine engine =
            cfg.engine == Engine::Full ? Engine::Full : Engine::Effective;
        EngineRun run = compute_engine_run(cfg, engine);
        SweepRow row;
        row.value = values[i];
        row.steady_delta_e_over_eb =
            run.trajectory.stored_energy.back() / cfg.e_b;
        row.steady_ergotropy_over_eb =
            run.trajectory.ergotropy.back() / cfg.e_b;
        try {
          const auto report =
              saturation_time(run.trajectory, cfg.battery(),
                              defaults::saturation_threshold,
                              cfg.quench_times_absolute());
          row.saturation_gamma_eg_t = report.time * cfg.gamma_eg;
        } catch (const NumericError&) {
          row.saturation_gamma_eg_t = std::nullopt;  // never crossed
        }
        rows[i] = row;
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(values.size());
        return;
      }
    }
  };

  int n_workers = workers > 0
                      ? workers
                      : static_cast<int>(std::thread::hardware_concurrency());
  n_workers = std::max(1, std::min<int>(n_workers, static_cast<int>(values.size())));
  if (n_workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(n_workers);
    for (int i = 0; i < n_workers; ++i) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);
  return rows;
}

std::vector<SweepRow> run_sweep_to_csv(const ExperimentConfig& base,
                                       const std::string& axis,
                                       std::span<const double> values,
                                       int workers, std::string* csv_path) {
  std::vector<SweepRow> rows = run_sweep(base, axis, values, workers);
  CsvDocument doc;
  doc.meta = config_meta_lines(base, base.engine);
  doc.meta.insert(doc.meta.begin() + 1, "sweep_axis=" + axis);
  doc.columns = {axis, "steady_delta_E_over_EB", "steady_ergotropy_over_EB",
                 "saturation_gamma_eg_T"};
  for (const auto& r : rows) {
    doc.rows.push_back({format_sig12(r.value),
                        format_sig12(r.steady_delta_e_over_eb),
                        format_sig12(r.steady_ergotropy_over_eb),
                        r.saturation_gamma_eg_t
                            ? format_sig12(*r.saturation_gamma_eg_t)
                            : ""});
  }
  const std::filesystem::path path = std::filesystem::path(base.out_dir) /
                                     (base.prefix + "_sweep_" + axis + ".csv");
  write_csv_file(path.string(), doc);
  if (csv_path != nullptr) *csv_path = path.string();
  return rows;
}

}  // namespace qbat
