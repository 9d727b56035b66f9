#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "freqgate/drive.hpp"
#include "freqgate/lattice.hpp"
#include "freqgate/metrics.hpp"

namespace freqgate::design {

inline constexpr double kPenaltyWeight = 1e4;

enum class Goal {
  success,  // maximize P subject to F >= floor
  product,  // maximize F * P subject to F >= floor
};

std::string to_string(Goal goal);
Goal goal_from_string(const std::string& name);

enum class StartStrategy {
  uniform,   // phases uniform in (-pi, pi], amplitudes uniform in [0, a_max]
  mirrored,  // equal drives, theta_k = pi/2 +- k pi/d (jittered), amplitudes a_max U/k
};

std::string to_string(StartStrategy start);
StartStrategy start_from_string(const std::string& name);

struct DesignProblem {
  GateTarget target = hadamard_target();
  ModeLattice lattice{128, 2};
  int harmonics = 1;  // p, per EOM
  double fidelity_floor = 0.9999;
  int shaper_window = 32;
  int restarts = 20;
  int iteration_budget = 3000;
  std::uint64_t master_seed = 1;
  Goal goal = Goal::success;
  StartStrategy start = StartStrategy::uniform;
  double start_amplitude_max = 3.141592653589793;
  // When > 0, every restart first runs this many iterations and only the
  // `polish_count` best continue to the full budget.
  int screen_iterations = 0;
  int polish_count = 0;

  /// Throws std::invalid_argument on any inconsistency.
  void validate() const;

  int parameter_count() const { return shaper_window + 4 * harmonics; }

  /// First lattice index of the free shaper window on `on` (which must share
  /// this problem's window size).
  int shaper_begin(const ModeLattice& on) const;
  int shaper_begin() const { return shaper_begin(lattice); }
};

/// Shaper phases over the free window plus both EOM drives (harmonics 1..p).
/// Flat layout: [shaper (W)] [beta_1..p theta_1..p of EOM 1] [same for EOM 2].
struct ParameterVector {
  std::vector<double> shaper;
  std::vector<double> first_amplitudes, first_phases;
  std::vector<double> second_amplitudes, second_phases;

  static ParameterVector zeros(int shaper_window, int harmonics);

  /// Canonical form of an unconstrained flat vector: negative amplitudes are
  /// flipped (beta, theta) -> (-beta, theta + pi), all phases wrapped.
  static ParameterVector from_flat(std::span<const double> flat, int shaper_window, int harmonics);
  std::vector<double> flat() const;

  int shaper_window() const { return static_cast<int>(shaper.size()); }
  int harmonics() const { return static_cast<int>(first_amplitudes.size()); }
  std::size_t size() const { return shaper.size() + 4 * first_amplitudes.size(); }

  FourierDrive first_drive() const;
  FourierDrive second_drive() const;

  /// Full-lattice shaper pattern with the window starting at `begin`.
  ShaperPattern shaper_pattern(int mode_count, int begin) const;

  friend bool operator==(const ParameterVector&, const ParameterVector&) = default;
};

struct Metrics {
  double fidelity = 0.0;
  double success_probability = 0.0;
};

struct RestartSummary {
  int index = 0;
  double objective = 0.0;
  double fidelity = 0.0;
  double success_probability = 0.0;
  int iterations = 0;
  int evaluations = 0;
  bool feasible = false;
  bool polished = true;
  std::string stop_reason;
};

struct AliasingReport {
  int mode_count = 0;  // the doubled lattice
  double fidelity = 0.0;
  double success_probability = 0.0;
  double delta_fidelity = 0.0;  // F(2M) - F(M)
  double delta_success = 0.0;
};

struct DesignResult {
  DesignProblem problem;
  ParameterVector parameters;
  double fidelity = 0.0;
  double success_probability = 0.0;
  double objective = 0.0;
  bool converged = false;
  int winner = 0;
  std::vector<RestartSummary> restarts;
  AliasingReport aliasing;
  double wall_time_s = 0.0;
};

}  // namespace freqgate::design
