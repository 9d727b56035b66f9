#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "freqgate/matrix_json.hpp"

namespace freqgate::app {

inline constexpr const char* kVersion = "0.1.0";

/// Missing or unreadable bundle contents.
class BundleError : public std::runtime_error {
 public:
  explicit BundleError(const std::string& what) : std::runtime_error(what) {}
};

/// 64-bit FNV-1a.
std::uint64_t fnv1a64(std::string_view bytes);
/// "fnv1a64:" followed by 16 lowercase hex digits.
std::string hash_label(std::string_view bytes);

/// Writes every file into a hidden sibling directory and renames it onto
/// `target` only once all writes succeeded, so `target` is either absent or
/// complete. An existing `target` is an error unless `replace` is set and it
/// holds a manifest.json.
void write_bundle_atomically(const std::filesystem::path& target,
                             const std::map<std::string, std::string>& files, bool replace = false);

/// Reads every regular file of a bundle. Throws BundleError listing
/// whichever of `required` are missing.
std::map<std::string, std::string> read_bundle(const std::filesystem::path& dir,
                                               const std::vector<std::string>& required);

/// UTC timestamp, ISO 8601 with seconds.
std::string utc_now();

}  // namespace freqgate::app
