// SPDX-License-Identifier: Apache-2.0
#include "dps/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace dps {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, sep)) parts.push_back(trim(item));
  return parts;
}

int parse_int(const std::string& value, const std::string& what) {
  try {
    std::size_t pos = 0;
    const int v = std::stoi(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ConfigError(what + ": expected an integer, got '" + value + "'");
  }
}

std::uint64_t parse_u64(const std::string& value, const std::string& what) {
  try {
    std::size_t pos = 0;
    const std::uint64_t v = std::stoull(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ConfigError(what + ": expected an unsigned integer, got '" + value + "'");
  }
}

double parse_real(const std::string& value, const std::string& what) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(value, &pos);
    if (pos != value.size() || !std::isfinite(v)) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ConfigError(what + ": expected a number, got '" + value + "'");
  }
}

bool parse_bool(const std::string& value, const std::string& what) {
  if (value == "1" || value == "true" || value == "on") return true;
  if (value == "0" || value == "false" || value == "off") return false;
  throw ConfigError(what + ": expected a boolean, got '" + value + "'");
}

void check_positive(int v, const char* field) {
  if (v < 1) throw ConfigError(std::string(field) + ": must be a positive integer");
}

}  // namespace

void SystemConfig::validate() const {
  check_positive(n_tx, "n_tx");
  check_positive(n_rx, "n_rx");
  check_positive(n_users, "n_users");
  check_positive(n_subcarriers, "n_subcarriers");
  check_positive(n_streams, "n_streams");
  check_positive(n_rf_tx, "n_rf_tx");
  check_positive(n_rf_rx, "n_rf_rx");
  check_positive(n_clusters, "n_clusters");
  check_positive(n_rays, "n_rays");
  check_positive(n_trials, "n_trials");
  check_positive(altmin_max_iter, "altmin_max_iter");

  if (n_rf_tx < n_users * n_streams || n_rf_tx > n_tx) {
    throw ConfigError("n_rf_tx: must satisfy n_users*n_streams <= n_rf_tx <= n_tx (got " +
                      std::to_string(n_rf_tx) + ", bounds [" +
                      std::to_string(n_users * n_streams) + ", " + std::to_string(n_tx) + "])");
  }
  if (n_rf_rx < n_streams || n_rf_rx > n_rx) {
    throw ConfigError("n_rf_rx: must satisfy n_streams <= n_rf_rx <= n_rx (got " +
                      std::to_string(n_rf_rx) + ", bounds [" + std::to_string(n_streams) + ", " +
                      std::to_string(n_rx) + "])");
  }
  if (n_tx <= (n_users - 1) * n_rx) {
    throw ConfigError("n_tx: must exceed (n_users-1)*n_rx = " +
                      std::to_string((n_users - 1) * n_rx) + " for a nonempty BD null space");
  }
  if (n_streams > n_rx) {
    throw ConfigError("n_streams: must not exceed n_rx (got " + std::to_string(n_streams) +
                      " > " + std::to_string(n_rx) + ")");
  }
  if (angular_spread_deg < 0.0) {
    throw ConfigError("angular_spread_deg: must be nonnegative");
  }
  if (path_loss.empty() || (path_loss.size() != 1 && static_cast<int>(path_loss.size()) != n_users)) {
    throw ConfigError("path_loss: provide one value or exactly n_users values");
  }
  for (double rho : path_loss) {
    if (!(rho > 0.0)) throw ConfigError("path_loss: entries must be positive");
  }
  if (snr_grid_db.empty()) throw ConfigError("snr_grid_db: must not be empty");
  if (!(altmin_tol > 0.0)) throw ConfigError("altmin_tol: must be positive");
  if (omp_grid_size < 0) throw ConfigError("omp_grid_size: must be >= 0 (0 selects 2x antennas)");
  if (omp_grid_size > 0 && omp_grid_size < std::max(n_rf_tx, n_rf_rx)) {
    throw ConfigError("omp_grid_size: must be at least max(n_rf_tx, n_rf_rx)");
  }
}

SystemConfig SystemConfig::desk() { return SystemConfig{}; }

SystemConfig SystemConfig::paper() {
  SystemConfig cfg;
  cfg.n_tx = 256;
  cfg.n_rx = 16;
  cfg.n_users = 3;
  cfg.n_subcarriers = 128;
  cfg.n_streams = 3;
  cfg.n_rf_tx = 9;   // minimum n_users * n_streams
  cfg.n_rf_rx = 3;   // minimum n_streams
  cfg.n_clusters = 3;
  cfg.n_rays = 8;
  cfg.angular_spread_deg = 10.0;
  cfg.n_trials = 5000;
  return cfg;
}

std::string mode_name(Mode m) {
  switch (m) {
    case Mode::kSnrSweep: return "snr_sweep";
    case Mode::kRfSweep: return "rf_sweep";
    case Mode::kDecomposeOnly: return "decompose_only";
  }
  return "unknown";
}

Mode mode_from_name(const std::string& name) {
  if (name == "snr_sweep") return Mode::kSnrSweep;
  if (name == "rf_sweep") return Mode::kRfSweep;
  if (name == "decompose_only") return Mode::kDecomposeOnly;
  throw ConfigError("mode: expected snr_sweep, rf_sweep or decompose_only, got '" + name + "'");
}

ExperimentSetup preset_setup(const std::string& name) {
  ExperimentSetup setup;
  if (name == "desk") {
    setup.config = SystemConfig::desk();
  } else if (name == "paper") {
    setup.config = SystemConfig::paper();
    setup.run.nrf_grid = {9, 12, 15};
  } else {
    throw ConfigError("preset: expected 'desk' or 'paper', got '" + name + "'");
  }
  return setup;
}

std::vector<double> parse_double_list(const std::string& text, const std::string& what) {
  std::vector<double> out;
  for (const auto& part : split(text, ',')) {
    if (part.empty()) continue;
    out.push_back(parse_real(part, what));
  }
  if (out.empty()) throw ConfigError(what + ": list must not be empty");
  return out;
}

std::vector<int> parse_int_list(const std::string& text, const std::string& what) {
  std::vector<int> out;
  for (const auto& part : split(text, ',')) {
    if (part.empty()) continue;
    out.push_back(parse_int(part, what));
  }
  if (out.empty()) throw ConfigError(what + ": list must not be empty");
  return out;
}

std::vector<Algorithm> parse_algorithm_list(const std::string& text) {
  std::vector<Algorithm> out;
  for (const auto& part : split(text, ',')) {
    if (part.empty()) continue;
    const auto algo = algorithm_from_name(part);
    if (!algo) {
      throw ConfigError("algorithms: unknown algorithm '" + part +
                        "' (expected fully_digital, altmin_bd, altmin_no_bd, omp)");
    }
    if (std::find(out.begin(), out.end(), *algo) == out.end()) out.push_back(*algo);
  }
  if (out.empty()) throw ConfigError("algorithms: list must not be empty");
  return out;
}

std::vector<double> parse_snr_range(const std::string& text) {
  const auto parts = split(text, ':');
  if (parts.size() == 1) return {parse_real(parts[0], "snr")};
  if (parts.size() != 3) {
    throw ConfigError("snr: expected 'start:step:stop' or a single value, got '" + text + "'");
  }
  const double start = parse_real(parts[0], "snr");
  const double step = parse_real(parts[1], "snr");
  const double stop = parse_real(parts[2], "snr");
  if (!(step > 0.0)) throw ConfigError("snr: step must be positive");
  if (stop < start) throw ConfigError("snr: stop must be >= start");
  std::vector<double> grid;
  for (int i = 0;; ++i) {
    const double v = start + i * step;
    if (v > stop + 1e-9) break;
    grid.push_back(v);
  }
  return grid;
}

void apply_config_key(ExperimentSetup& setup, const std::string& key, const std::string& value) {
  SystemConfig& cfg = setup.config;
  RunOptions& run = setup.run;
  if (key == "n_tx") cfg.n_tx = parse_int(value, key);
  else if (key == "n_rx") cfg.n_rx = parse_int(value, key);
  else if (key == "n_users") cfg.n_users = parse_int(value, key);
  else if (key == "n_subcarriers") cfg.n_subcarriers = parse_int(value, key);
  else if (key == "n_streams") cfg.n_streams = parse_int(value, key);
  else if (key == "n_rf_tx") cfg.n_rf_tx = parse_int(value, key);
  else if (key == "n_rf_rx") cfg.n_rf_rx = parse_int(value, key);
  else if (key == "n_clusters") cfg.n_clusters = parse_int(value, key);
  else if (key == "n_rays") cfg.n_rays = parse_int(value, key);
  else if (key == "angular_spread_deg") cfg.angular_spread_deg = parse_real(value, key);
  else if (key == "path_loss") cfg.path_loss = parse_double_list(value, key);
  else if (key == "snr_grid_db") cfg.snr_grid_db = parse_double_list(value, key);
  else if (key == "n_trials") cfg.n_trials = parse_int(value, key);
  else if (key == "master_seed") cfg.master_seed = parse_u64(value, key);
  else if (key == "altmin_tol") cfg.altmin_tol = parse_real(value, key);
  else if (key == "altmin_max_iter") cfg.altmin_max_iter = parse_int(value, key);
  else if (key == "omp_grid_size") cfg.omp_grid_size = parse_int(value, key);
  else if (key == "omp_with_bd") cfg.omp_with_bd = parse_bool(value, key);
  else if (key == "mode") run.mode = mode_from_name(value);
  else if (key == "nrf_tx_grid") run.nrf_grid = parse_int_list(value, key);
  else if (key == "algorithms") run.algorithms = parse_algorithm_list(value);
  else if (key == "out_dir") run.out_dir = value;
  else if (key == "threads") run.threads = parse_int(value, key);
  else if (key == "write_raw") run.write_raw = parse_bool(value, key);
  else throw ConfigError("unknown config key '" + key + "'");
}

void load_config_file(ExperimentSetup& setup, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config file '" + path + "' is not readable");
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string text = trim(line.substr(0, line.find('#')));
    if (text.empty()) continue;
    const auto eq = text.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config file '" + path + "' line " + std::to_string(line_no) +
                        ": expected key=value");
    }
    apply_config_key(setup, trim(text.substr(0, eq)), trim(text.substr(eq + 1)));
  }
}

}  // namespace dps
