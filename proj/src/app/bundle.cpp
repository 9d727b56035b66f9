#include "freqgate/app/bundle.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <unistd.h>

namespace freqgate::app {

namespace fs = std::filesystem;

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hash_label(std::string_view bytes) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "fnv1a64:%016llx", static_cast<unsigned long long>(fnv1a64(bytes)));
  return buf;
}

void write_bundle_atomically(const fs::path& target, const std::map<std::string, std::string>& files, bool replace) {
  const fs::path parent = target.has_parent_path() ? target.parent_path() : fs::path(".");
  const std::string name = target.filename().string();
  if (name.empty() || name == "." || name == "..") throw std::runtime_error("output path '" + target.string() + "' names no directory");
  if (fs::exists(target)) {
    if (!replace) throw std::runtime_error("output path '" + target.string() + "' already exists (use --force to replace a bundle)");
    if (!fs::exists(target / "manifest.json")) {
      throw std::runtime_error("refusing to replace '" + target.string() + "': it is not a result bundle");
    }
  }
  std::error_code ec;
  fs::create_directories(parent, ec);
  if (ec) throw std::runtime_error("cannot create '" + parent.string() + "': " + ec.message());

  const fs::path tmp = parent / ("." + name + ".partial-" + std::to_string(::getpid()));
  fs::remove_all(tmp, ec);
  try {
    fs::create_directory(tmp);
    for (const auto& [file, content] : files) {
      std::ofstream os(tmp / file, std::ios::binary);
      os << content;
      os.close();
      if (!os) throw std::runtime_error("write failed for '" + (tmp / file).string() + "'");
    }
    if (fs::exists(target)) {
      const fs::path old = parent / ("." + name + ".old-" + std::to_string(::getpid()));
      fs::rename(target, old);
      fs::rename(tmp, target);
      fs::remove_all(old);
    } else {
      fs::rename(tmp, target);
    }
  } catch (const fs::filesystem_error& e) {
    fs::remove_all(tmp, ec);
    throw std::runtime_error(std::string("cannot write bundle: ") + e.what());
  } catch (...) {
    fs::remove_all(tmp, ec);
    throw;
  }
}

std::map<std::string, std::string> read_bundle(const fs::path& dir, const std::vector<std::string>& required) {
  if (!fs::is_directory(dir)) throw BundleError("bundle '" + dir.string() + "' is not a directory");
  std::map<std::string, std::string> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    std::ifstream is(entry.path(), std::ios::binary);
    std::ostringstream ss;
    ss << is.rdbuf();
    files[entry.path().filename().string()] = ss.str();
  }
  std::string missing;
  for (const auto& r : required) {
    if (!files.count(r)) missing += "\n  missing: " + r;
  }
  if (!missing.empty()) throw BundleError("incomplete bundle '" + dir.string() + "':" + missing);
  return files;
}

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace freqgate::app
