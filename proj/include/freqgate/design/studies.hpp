#pragma once

#include <cstdint>
#include <vector>

#include "freqgate/design/problem.hpp"
#include "freqgate/drive.hpp"

namespace freqgate::design {

/// Re-evaluates the design with the shaper blocking every bin outside a
/// `kept_modes`-wide band centered on the computational window.
Metrics passband_truncation_check(const DesignResult& result, int kept_modes);

/// Two copies of the gate on one lattice, `separation` empty bins apart. Both
/// share the EOM drives; each shaper bin takes its phase from the nearer gate.
/// Collective metrics are taken over the 2d x 2d block against blockdiag(U, U);
/// the relative phase between the two blocks is left free.
Metrics parallel_gate_metrics(const DesignResult& result, int separation);

struct ScalingOptions {
  int mode_count = 128;
  int shaper_window = 32;
  double fidelity_floor = 0.99;
  int restarts = 60;
  int screen_iterations = 500;
  int polish_count = 4;
  int iteration_budget = 3000;
  std::uint64_t master_seed = 1;
  int threads = 0;
};

struct ScalingRow {
  int dim = 0;
  int harmonics = 0;
  double fidelity = 0.0;
  double success_probability = 0.0;
  double product = 0.0;
  bool converged = false;
  double wall_time_s = 0.0;
};

/// DFT(d) with p = d - 1 harmonics, maximizing F P above a relaxed floor.
DesignProblem scaling_problem(int dim, const ScalingOptions& options);

std::vector<ScalingRow> scaling_study(int d_max, const ScalingOptions& options = {},
                                      std::vector<DesignResult>* results = nullptr);

/// Best balanced mixer reachable with one EOM: the d x d block of F D F^H
/// with all |V_mn|^2 equal, maximizing P over a free Fourier-series drive.
struct SingleEomProblem {
  int dim = 2;
  int mode_count = 128;
  int harmonics = 8;
  int restarts = 16;
  int iteration_budget = 2000;
  double start_amplitude_max = 2.0;
  double balance_tolerance = 1e-6;  // max | |V_mn|^2 d^2 / S - 1 |
  std::uint64_t master_seed = 1;

  void validate() const;
};

struct SingleEomResult {
  int dim = 0;
  double ceiling = 0.0;        // d / (2d - 1)
  double scatter_bound = 0.0;  // (d - 1) / (2d - 1)
  double success_probability = 0.0;
  double imbalance = 0.0;
  bool balanced = false;
  int winner = 0;
  FourierDrive drive;
  std::vector<double> restart_success;  // per restart, NaN when unbalanced
};

SingleEomResult single_eom_search(const SingleEomProblem& problem, int threads = 0);

}  // namespace freqgate::design
