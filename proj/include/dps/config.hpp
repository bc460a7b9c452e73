// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "dps/evaluation.hpp"
#include "dps/types.hpp"

#include <string>
#include <vector>

namespace dps {

enum class Mode { kSnrSweep, kRfSweep, kDecomposeOnly };

std::string mode_name(Mode m);
Mode mode_from_name(const std::string& name);  // throws ConfigError

// Experiment controls that are not part of the physical scenario.
struct RunOptions {
  Mode mode = Mode::kSnrSweep;
  std::vector<int> nrf_grid{4, 6, 8};  // rf_sweep axis values
  std::vector<Algorithm> algorithms{Algorithm::kFullyDigital, Algorithm::kAltminBd,
                                    Algorithm::kAltminNoBd, Algorithm::kOmp};
  std::string out_dir = ".";
  int threads = 1;  // 0 = hardware concurrency
  bool write_raw = false;
};

struct ExperimentSetup {
  SystemConfig config;
  RunOptions run;
};

// Named presets: "desk" (scaled-down default) or "paper" (full-scale
// long-running scenario). Throws ConfigError on unknown names.
ExperimentSetup preset_setup(const std::string& name);

// Applies one key=value pair from a config file or manifest. Throws
// ConfigError naming the key for unknown keys or unparseable values.
void apply_config_key(ExperimentSetup& setup, const std::string& key, const std::string& value);

// Flat key=value file; '#' starts a comment, blank lines are skipped.
// Values override the setup passed in, so the caller chooses the preset
// baseline first. Validation is left to the caller (CLI flags may still
// override).
void load_config_file(ExperimentSetup& setup, const std::string& path);

// Comma-separated helpers shared by the file parser and the CLI.
std::vector<double> parse_double_list(const std::string& text, const std::string& what);
std::vector<int> parse_int_list(const std::string& text, const std::string& what);
std::vector<Algorithm> parse_algorithm_list(const std::string& text);

// "start:step:stop" (inclusive) or a single value.
std::vector<double> parse_snr_range(const std::string& text);

}  // namespace dps
