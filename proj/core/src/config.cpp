#include "qbat/config.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "qbat/observables.hpp"
#include "qbat/protocol.hpp"

namespace qbat {

std::string to_string(Engine engine) {
  switch (engine) {
    case Engine::Full: return "full";
    case Engine::Effective: return "effective";
    case Engine::Both: return "both";
  }
  return "?";
}

namespace {

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

double parse_double(const std::string& value, const std::string& field) {
  const std::string v = trim(value);
  if (v == "inf" || v == "infinity") return std::numeric_limits<double>::infinity();
  try {
    std::size_t pos = 0;
    const double out = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return out;
  } catch (const std::exception&) {
    throw ConfigError(field + ": cannot parse number '" + v + "'");
  }
}

int parse_int(const std::string& value, const std::string& field) {
  const double d = parse_double(value, field);
  const int i = static_cast<int>(std::llround(d));
  if (std::abs(d - i) > 1e-12) {
    throw ConfigError(field + ": expected an integer, got '" + value + "'");
  }
  return i;
}

std::vector<double> parse_list(const std::string& value,
                               const std::string& field) {
  std::vector<double> out;
  std::string token;
  std::stringstream ss(value);
  while (std::getline(ss, token, ',')) {
    token = trim(token);
    if (token.empty()) continue;
    out.push_back(parse_double(token, field));
  }
  return out;
}

// Shortest decimal form that parses back bit-exactly.
std::string format_exact(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  const auto result = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, result.ptr);
}

using KeyMap = std::map<std::string, std::string>;  // "section.key" -> value

KeyMap tokenize(const std::string& text) {
  KeyMap out;
  std::istringstream in(text);
  std::string line, section;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        std::ostringstream msg;
        msg << "config line " << line_no << ": malformed section header";
        throw ConfigError(msg.str());
      }
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      std::ostringstream msg;
      msg << "config line " << line_no << ": expected key = value";
      throw ConfigError(msg.str());
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (section.empty() || key.empty()) {
      std::ostringstream msg;
      msg << "config line " << line_no << ": key outside a [section]";
      throw ConfigError(msg.str());
    }
    out[section + "." + key] = value;
  }
  return out;
}

}  // namespace

BatteryModel ExperimentConfig::battery() const {
  switch (kind) {
    case BatteryKind::UniformLadder:
      return BatteryModel::uniform_ladder(static_cast<int>(battery_size), e_b);
    case BatteryKind::LargeSpin:
      return BatteryModel::large_spin(battery_size, e_b);
    case BatteryKind::TruncatedHO:
      return BatteryModel::truncated_ho(static_cast<int>(battery_size), e_b);
  }
  throw ConfigError("battery.kind: unknown kind");
}

ChargerParams ExperimentConfig::charger() const {
  ChargerParams c;
  c.Delta = Delta;
  c.delta = delta;
  c.Omega = Omega;
  c.gamma_hg = gamma_hg;
  c.gamma_eg = gamma_eg;
  c.gamma_he = gamma_he;
  c.g = g;
  c.validate();
  return c;
}

DensityMatrix ExperimentConfig::initial_state() const {
  const BatteryModel b = battery();
  if (!thermal) return DensityMatrix::level_projector(b.dim, 0);
  return thermal_state(b, beta);
}

std::vector<double> ExperimentConfig::time_grid() const {
  if (horizon <= 0.0) return {0.0};
  const double t_end = horizon / gamma_eg;
  std::vector<double> grid(grid_points);
  for (int i = 0; i < grid_points; ++i) {
    grid[i] = t_end * static_cast<double>(i) / (grid_points - 1);
  }
  grid[0] = 0.0;
  return grid;
}

std::vector<double> ExperimentConfig::quench_times_absolute() const {
  std::vector<double> out;
  out.reserve(quench_times.size());
  for (double tau : quench_times) out.push_back(tau / gamma_eg);
  return out;
}

ExperimentConfig parse_config(const std::string& text) {
  KeyMap kv = tokenize(text);
  ExperimentConfig cfg;

  auto take = [&kv](const std::string& key) {
    auto it = kv.find(key);
    if (it == kv.end()) return std::pair<bool, std::string>{false, {}};
    std::pair<bool, std::string> out{true, it->second};
    kv.erase(it);
    return out;
  };
  auto require = [&take](const std::string& key) {
    auto [found, value] = take(key);
    if (!found) throw ConfigError(key + ": required key missing");
    return value;
  };

  // [battery]
  const std::string kind = require("battery.kind");
  if (kind == "uniform") cfg.kind = BatteryKind::UniformLadder;
  else if (kind == "spin") cfg.kind = BatteryKind::LargeSpin;
  else if (kind == "ho") cfg.kind = BatteryKind::TruncatedHO;
  else throw ConfigError("battery.kind: expected uniform | spin | ho");
  if (cfg.kind == BatteryKind::LargeSpin) {
    cfg.battery_size = parse_double(require("battery.J"), "battery.J");
  } else {
    cfg.battery_size = parse_int(require("battery.N"), "battery.N");
  }
  if (auto [ok, v] = take("battery.E_B"); ok) {
    cfg.e_b = parse_double(v, "battery.E_B");
  }

  // [charger]
  cfg.Delta = parse_double(require("charger.Delta"), "charger.Delta");
  cfg.delta = parse_double(require("charger.delta"), "charger.delta");
  cfg.Omega = parse_double(require("charger.Omega"), "charger.Omega");
  cfg.gamma_hg = parse_double(require("charger.gamma_hg"), "charger.gamma_hg");
  cfg.gamma_eg = parse_double(require("charger.gamma_eg"), "charger.gamma_eg");
  cfg.gamma_he = parse_double(require("charger.gamma_he"), "charger.gamma_he");
  cfg.g_spec = trim(require("charger.g"));

  // [initial]
  const std::string init = trim(require("initial.state"));
  if (init == "ground") {
    cfg.thermal = false;
    cfg.beta = 0.0;
  } else if (init.rfind("thermal:", 0) == 0) {
    cfg.thermal = true;
    cfg.beta = parse_double(init.substr(8), "initial.state");
    if (std::isnan(cfg.beta) || cfg.beta < 0.0) {
      throw ConfigError("initial.state: thermal beta must be >= 0 or inf");
    }
  } else {
    throw ConfigError("initial.state: expected ground | thermal:<beta>");
  }

  // [run]
  const std::string engine = trim(require("run.engine"));
  if (engine == "full") cfg.engine = Engine::Full;
  else if (engine == "effective") cfg.engine = Engine::Effective;
  else if (engine == "both") cfg.engine = Engine::Both;
  else throw ConfigError("run.engine: expected full | effective | both");
  cfg.horizon = parse_double(require("run.horizon"), "run.horizon");
  if (cfg.horizon < 0.0) throw ConfigError("run.horizon: must be >= 0");
  if (auto [ok, v] = take("run.grid_points"); ok) {
    cfg.grid_points = parse_int(v, "run.grid_points");
  }
  if (auto [ok, v] = take("run.quench_times"); ok) {
    cfg.quench_times = parse_list(v, "run.quench_times");
  }

  // [output]
  if (auto [ok, v] = take("output.dir"); ok) cfg.out_dir = v;
  if (auto [ok, v] = take("output.prefix"); ok) cfg.prefix = v;

  // [tolerances]
  if (auto [ok, v] = take("tolerances.rel"); ok) {
    cfg.tol.rel = parse_double(v, "tolerances.rel");
  }
  if (auto [ok, v] = take("tolerances.abs"); ok) {
    cfg.tol.abs = parse_double(v, "tolerances.abs");
  }

  if (!kv.empty()) {
    throw ConfigError(kv.begin()->first + ": unknown key");
  }

  // Cross-field validation.
  if (cfg.horizon > 0.0) {
    if (!(cfg.gamma_eg > 0.0)) {
      throw ConfigError(
          "charger.gamma_eg: must be positive to express run.horizon in "
          "1/gamma_eg units");
    }
    if (cfg.grid_points < 2) {
      throw ConfigError("run.grid_points: need at least 2 samples");
    }
  }
  if (!(cfg.tol.rel > 0.0) || !(cfg.tol.abs > 0.0)) {
    throw ConfigError("tolerances: rel and abs must be positive");
  }
  double prev = 0.0;
  for (double tau : cfg.quench_times) {
    if (!(tau > prev)) {
      throw ConfigError(
          "run.quench_times: must be strictly increasing and positive");
    }
    prev = tau;
  }
  if (!cfg.quench_times.empty() && cfg.kind != BatteryKind::TruncatedHO) {
    throw ConfigError(
        "run.quench_times: the quench protocol is defined for the ho battery "
        "only");
  }

  const BatteryModel b = cfg.battery();  // validates battery fields

  // Resolve the coupling, possibly through the optimization condition.
  if (cfg.g_spec.rfind("optimal:", 0) == 0) {
    const int n = parse_int(cfg.g_spec.substr(8), "charger.g");
    ChargerParams c;
    c.Delta = cfg.Delta;
    c.delta = cfg.delta;
    c.Omega = cfg.Omega;
    c.gamma_hg = cfg.gamma_hg;
    c.gamma_eg = cfg.gamma_eg;
    c.gamma_he = cfg.gamma_he;
    try {
      cfg.g = optimal_coupling(b, c, n);
    } catch (const NumericError& e) {
      throw ConfigError(std::string("charger.g: ") + e.what());
    }
  } else {
    cfg.g = parse_double(cfg.g_spec, "charger.g");
  }
  cfg.charger();  // validates charger fields

  return cfg;
}

ExperimentConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string serialize_config(const ExperimentConfig& cfg) {
  std::ostringstream out;
  out << "[battery]\n";
  out << "kind = " << to_string(cfg.kind) << "\n";
  if (cfg.kind == BatteryKind::LargeSpin) {
    out << "J = " << format_exact(cfg.battery_size) << "\n";
  } else {
    out << "N = " << format_exact(cfg.battery_size) << "\n";
  }
  out << "E_B = " << format_exact(cfg.e_b) << "\n\n";
  out << "[charger]\n";
  out << "Delta = " << format_exact(cfg.Delta) << "\n";
  out << "delta = " << format_exact(cfg.delta) << "\n";
  out << "Omega = " << format_exact(cfg.Omega) << "\n";
  out << "gamma_hg = " << format_exact(cfg.gamma_hg) << "\n";
  out << "gamma_eg = " << format_exact(cfg.gamma_eg) << "\n";
  out << "gamma_he = " << format_exact(cfg.gamma_he) << "\n";
  out << "g = " << cfg.g_spec << "\n\n";
  out << "[initial]\n";
  out << "state = "
      << (cfg.thermal ? "thermal:" + format_exact(cfg.beta) : "ground")
      << "\n\n";
  out << "[run]\n";
  out << "engine = " << to_string(cfg.engine) << "\n";
  out << "horizon = " << format_exact(cfg.horizon) << "\n";
  out << "grid_points = " << cfg.grid_points << "\n";
  if (!cfg.quench_times.empty()) {
    out << "quench_times = ";
    for (std::size_t i = 0; i < cfg.quench_times.size(); ++i) {
      if (i) out << ", ";
      out << format_exact(cfg.quench_times[i]);
    }
    out << "\n";
  }
  out << "\n[output]\n";
  out << "dir = " << cfg.out_dir << "\n";
  out << "prefix = " << cfg.prefix << "\n\n";
  out << "[tolerances]\n";
  out << "rel = " << format_exact(cfg.tol.rel) << "\n";
  out << "abs = " << format_exact(cfg.tol.abs) << "\n";
  return out.str();
}

std::uint64_t config_hash(const ExperimentConfig& cfg) {
  const std::string text = serialize_config(cfg);
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace qbat
