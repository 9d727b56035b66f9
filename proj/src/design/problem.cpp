#include "freqgate/design/problem.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace freqgate::design {

std::string to_string(Goal goal) { return goal == Goal::success ? "success" : "product"; }

Goal goal_from_string(const std::string& name) {
  if (name == "success") return Goal::success;
  if (name == "product") return Goal::product;
  throw std::invalid_argument("unknown design goal '" + name + "' (expected success or product)");
}

std::string to_string(StartStrategy start) {
  return start == StartStrategy::uniform ? "uniform" : "mirrored";
}

StartStrategy start_from_string(const std::string& name) {
  if (name == "uniform") return StartStrategy::uniform;
  if (name == "mirrored") return StartStrategy::mirrored;
  throw std::invalid_argument("unknown start strategy '" + name + "' (expected uniform or mirrored)");
}

void DesignProblem::validate() const {
  if (target.dim() != lattice.dim()) {
    throw std::invalid_argument("design: target dimension " + std::to_string(target.dim()) +
                                " does not match lattice window " + std::to_string(lattice.dim()));
  }
  if (harmonics < 1) throw std::invalid_argument("design: harmonics must be >= 1");
  if (4 * harmonics > lattice.mode_count()) {
    throw std::invalid_argument("design: " + std::to_string(harmonics) +
                                " harmonics alias on a lattice of " +
                                std::to_string(lattice.mode_count()) + " modes");
  }
  if (!(fidelity_floor > 0.0 && fidelity_floor < 1.0)) {
    throw std::invalid_argument("design: fidelity floor must lie in (0, 1)");
  }
  if (shaper_window < 0 || shaper_window > lattice.mode_count()) {
    throw std::invalid_argument("design: shaper window must lie in [0, M]");
  }
  if (restarts < 1) throw std::invalid_argument("design: restarts must be >= 1");
  if (iteration_budget < 1) throw std::invalid_argument("design: iteration budget must be >= 1");
  if (!(start_amplitude_max >= 0.0) || !std::isfinite(start_amplitude_max)) {
    throw std::invalid_argument("design: start amplitude bound must be finite and >= 0");
  }
  if (screen_iterations < 0) throw std::invalid_argument("design: screen iterations must be >= 0");
  if (screen_iterations > 0 && polish_count < 1) {
    throw std::invalid_argument("design: screening needs polish_count >= 1");
  }
}

int DesignProblem::shaper_begin(const ModeLattice& on) const {
  const int begin = on.window_offset() + on.dim() / 2 - shaper_window / 2;
  return std::clamp(begin, 0, on.mode_count() - shaper_window);
}

ParameterVector ParameterVector::zeros(int shaper_window, int harmonics) {
  const auto w = static_cast<std::size_t>(shaper_window);
  const auto p = static_cast<std::size_t>(harmonics);
  return {std::vector<double>(w, 0.0), std::vector<double>(p, 0.0), std::vector<double>(p, 0.0),
          std::vector<double>(p, 0.0), std::vector<double>(p, 0.0)};
}

ParameterVector ParameterVector::from_flat(std::span<const double> flat, int shaper_window,
                                           int harmonics) {
  const auto w = static_cast<std::size_t>(shaper_window);
  const auto p = static_cast<std::size_t>(harmonics);
  if (flat.size() != w + 4 * p) {
    throw std::invalid_argument("parameter vector: expected " + std::to_string(w + 4 * p) +
                                " values, got " + std::to_string(flat.size()));
  }
  ParameterVector out = zeros(shaper_window, harmonics);
  for (std::size_t i = 0; i < w; ++i) out.shaper[i] = wrap_phase(flat[i]);
  auto drive = [&](std::size_t at, std::vector<double>& amp, std::vector<double>& ph) {
    for (std::size_t k = 0; k < p; ++k) {
      double a = flat[at + k];
      double t = flat[at + p + k];
      if (a < 0.0) {
        a = -a;
        t += std::numbers::pi;
      }
      amp[k] = a;
      ph[k] = wrap_phase(t);
    }
  };
  drive(w, out.first_amplitudes, out.first_phases);
  drive(w + 2 * p, out.second_amplitudes, out.second_phases);
  return out;
}

std::vector<double> ParameterVector::flat() const {
  std::vector<double> out(shaper);
  for (const auto* v : {&first_amplitudes, &first_phases, &second_amplitudes, &second_phases}) {
    out.insert(out.end(), v->begin(), v->end());
  }
  return out;
}

FourierDrive ParameterVector::first_drive() const {
  return FourierDrive::from_amplitudes_phases(first_amplitudes, first_phases);
}

FourierDrive ParameterVector::second_drive() const {
  return FourierDrive::from_amplitudes_phases(second_amplitudes, second_phases);
}

ShaperPattern ParameterVector::shaper_pattern(int mode_count, int begin) const {
  if (begin < 0 || begin + shaper_window() > mode_count) {
    throw std::invalid_argument("parameter vector: shaper window does not fit the lattice");
  }
  std::vector<double> phases(static_cast<std::size_t>(mode_count), 0.0);
  std::copy(shaper.begin(), shaper.end(), phases.begin() + begin);
  return ShaperPattern(std::move(phases));
}

}  // namespace freqgate::design
