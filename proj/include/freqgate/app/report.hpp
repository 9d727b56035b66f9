#pragma once

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

namespace freqgate::app {

/// Prints the bundle's headline numbers next to the published reference
/// values and writes plot-ready CSVs into `out_dir`. Returns the CSV names.
/// Throws BundleError for a missing or incomplete bundle.
std::vector<std::string> report(const std::filesystem::path& bundle, const std::filesystem::path& out_dir,
                                std::ostream& os);

}  // namespace freqgate::app
