#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

namespace freqgate::reference {

/// Published example of a measured 2x2 beamsplitter transformation
/// (moduli squared 0.4871, 0.4869, 0.4866, 0.4871; phase 3.1400 on (1,1)).
Eigen::MatrixXcd measured_beamsplitter();

/// Published example of a measured 3x3 DFT (tritter) transformation.
Eigen::MatrixXcd measured_tritter();

/// A published number with its citation, shown next to simulated values.
struct Value {
  std::string key;
  std::string label;
  double value;
  double uncertainty;  // 0 when none was quoted
  std::string citation;
};

const std::vector<Value>& published_values();

/// nullptr when `key` is unknown.
const Value* find(const std::string& key);

}  // namespace freqgate::reference
