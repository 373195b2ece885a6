#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qbat/dynamics.hpp"
#include "qbat/model.hpp"
#include "qbat/numerics.hpp"

namespace qbat {

enum class Engine { Full, Effective, Both };

std::string to_string(Engine engine);

// One experiment, parsed from the sectioned key=value config format
// (grammar documented in the README). Times in [run] are expressed in
// 1/gamma_eg units; tolerances are optional and default to the frozen table.
struct ExperimentConfig {
  // [battery]
  BatteryKind kind = BatteryKind::UniformLadder;
  double battery_size = 0.0;  // N for uniform/ho, J for spin
  double e_b = 1.0;

  // [charger]
  double Delta = 0.0;
  double delta = 0.0;
  double Omega = 0.0;
  double gamma_hg = 0.0;
  double gamma_eg = 0.0;
  double gamma_he = 0.0;
  std::string g_spec = "0";  // literal value or "optimal:<n>"
  double g = 0.0;            // resolved at load time

  // [initial]
  bool thermal = false;
  double beta = 0.0;  // 1/E_B units; +inf = ground state

  // [run]
  Engine engine = Engine::Both;
  double horizon = 0.0;  // 1/gamma_eg units; 0 = initial sample only
  int grid_points = defaults::grid_points;
  std::vector<double> quench_times;  // 1/gamma_eg units, strictly increasing

  // [output]
  std::string out_dir = "out";
  std::string prefix = "run";

  // [tolerances]
  OdeTolerances tol{};

  bool operator==(const ExperimentConfig&) const = default;

  BatteryModel battery() const;
  ChargerParams charger() const;
  DensityMatrix initial_state() const;
  // Absolute-time sample grid (horizon 0 -> single sample at t = 0).
  std::vector<double> time_grid() const;
  std::vector<double> quench_times_absolute() const;
};

// Parses and validates; resolves g = optimal:<n> through the optimization
// condition. Field-level ConfigError messages.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config_file(const std::string& path);

// Canonical text form; parse(serialize(cfg)) == cfg (doubles are printed
// with enough digits to round-trip exactly).
std::string serialize_config(const ExperimentConfig& cfg);

// FNV-1a over the canonical serialization; echoed in CSV headers.
std::uint64_t config_hash(const ExperimentConfig& cfg);

}  // namespace qbat
