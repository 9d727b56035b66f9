#pragma once

#include <ostream>

namespace freqgate::app {

enum ExitCode : int {
  kExitOk = 0,
  kExitConfig = 2,       // bad arguments, config, or bundle input
  kExitUnconverged = 3,  // bundle written, but an optimization or check missed its target
  kExitRuntime = 4,
};

/// Environment variable naming the default output root.
inline constexpr const char* kOutputRootEnv = "FREQGATE_OUT";

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace freqgate::app
