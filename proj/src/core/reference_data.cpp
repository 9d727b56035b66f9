#include "freqgate/reference_data.hpp"

#include <cmath>
#include <complex>

namespace freqgate::reference {

Eigen::MatrixXcd measured_beamsplitter() {
  Eigen::MatrixXcd v(2, 2);
  v << std::sqrt(0.4871), std::sqrt(0.4869),
       std::sqrt(0.4866), std::polar(std::sqrt(0.4871), 3.1400);
  return v;
}

Eigen::MatrixXcd measured_tritter() {
  Eigen::MatrixXcd v(3, 3);
  v << std::sqrt(0.3261), std::sqrt(0.3126), std::sqrt(0.3062),
       std::sqrt(0.3183), std::polar(std::sqrt(0.3290), 2.0925), std::polar(std::sqrt(0.3339), 4.1775),
       std::sqrt(0.3202), std::polar(std::sqrt(0.3476), 4.1365), std::polar(std::sqrt(0.3256), 2.0425);
  return v;
}

const std::vector<Value>& published_values() {
  static const std::vector<Value> values{
      {"bs.design.F", "beamsplitter design F", 0.9999, 0.0, "published simulation, sinewave drives"},
      {"bs.design.P", "beamsplitter design P", 0.9760, 0.0, "published simulation, sinewave drives"},
      {"bs.measured.F", "beamsplitter measured F", 0.99998, 0.00003, "published measurement, 5 sequences"},
      {"bs.measured.P", "beamsplitter measured P", 0.9739, 0.0003, "published measurement, 5 sequences"},
      {"tr.design.F", "tritter design F", 0.9999, 0.0, "published simulation, two-harmonic drives"},
      {"tr.design.P", "tritter design P", 0.9733, 0.0, "published simulation, two-harmonic drives"},
      {"tr.measured.F", "tritter measured F", 0.9989, 0.0004, "published measurement, 5 sequences"},
      {"tr.measured.P", "tritter measured P", 0.9730, 0.0002, "published measurement, 5 sequences"},
      {"single_eom.P", "single-EOM 2-mode ceiling P", 2.0 / 3.0, 0.0, "single-EOM Toeplitz bound"},
      {"scaling.FxP", "DFT up to d=7, F*P", 0.97, 0.0, "published simulation, d-1 harmonics (lower bound)"},
      {"visibility.min", "single-photon visibility (min)", 0.97, 0.0, "published weak-coherent-state fringes, dark-subtracted"},
      {"guardband.modes", "guardband to asymptote (modes)", 4.0, 0.0, "published parallel-gate measurement"},
      {"rf.bs.dbm", "RF power per EOM, beamsplitter (dBm)", 12.9, 0.0, "published estimate, V_pi = 5.37 V"},
  };
  return values;
}

const Value* find(const std::string& key) {
  for (const auto& v : published_values()) {
    if (v.key == key) return &v;
  }
  return nullptr;
}

}  // namespace freqgate::reference
