// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "dps/config.hpp"
#include "dps/evaluation.hpp"

#include <iosfwd>
#include <string>

namespace dps {

struct RunPaths {
  std::string results_csv;  // sweep results or decompose trajectory
  std::string manifest;
  std::string raw_csv;      // empty unless requested
};

// Executes the configured experiment, writes the output files into
// run.out_dir and prints progress plus a summary table to `progress`
// (standard error in the CLI; standard output stays clean for scripting).
RunPaths run_experiment(const ExperimentSetup& setup, std::ostream& progress);

// File writers, exposed for tests. Numbers are written with 17 significant
// digits so reruns are byte-identical.
void write_results_csv(const std::string& path, const ExperimentResult& result);
void write_raw_csv(const std::string& path, const ExperimentResult& result);

// Manifest: every config and run key as parseable key=value lines (the file
// can be fed back through --config to reproduce the run bit-exactly), plus
// '#' comment lines carrying provenance (version, timestamp, seed list,
// output paths, degenerate-draw count).
void write_manifest(const std::string& path, const ExperimentSetup& setup,
                    const ExperimentResult* result, const RunPaths& paths);

// Canonical float formatting used in all output files.
std::string format_double(double v);

}  // namespace dps
