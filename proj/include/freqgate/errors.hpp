#pragma once

#include <stdexcept>
#include <string>

namespace freqgate {

// Inputs that are well-formed but leave a quantity undefined
// (zero matrix fidelity, zero collected power, all-zero fringe).
class DegenerateInput : public std::domain_error {
 public:
  explicit DegenerateInput(const std::string& what) : std::domain_error(what) {}
};

}  // namespace freqgate
