#pragma once

#include <map>
#include <string>

#include "freqgate/app/config.hpp"
#include "freqgate/lab/apparatus.hpp"

namespace freqgate::app {

/// Documents of one run, keyed by file name. Nothing here depends on wall
/// time or thread count, so equal configs give byte-identical files.
struct RunOutput {
  std::map<std::string, std::string> files;
  json summary;          // copied into the manifest
  bool converged = true; // false: an optimization missed its floor or a check failed
};

RunOutput run_scenario(const ScenarioConfig& config, int threads = 0);

/// Truth matrix for characterize and visibility runs. `design_json` receives
/// the design document when the truth comes from an optimization.
TransferMatrix apparatus_truth(const ScenarioConfig& config, int threads, json* design_json = nullptr,
                               bool* converged = nullptr);

}  // namespace freqgate::app
