#pragma once

#include <cstdint>
#include <functional>
#include <random>

#include "freqgate/design/problem.hpp"

namespace freqgate::design {

struct OptimizeOptions {
  int threads = 0;  // 0: one per hardware thread
};

/// Independent stream for restart `index` of a run seeded with `master_seed`.
std::mt19937_64 restart_rng(std::uint64_t master_seed, std::uint64_t index);

/// Runs `count` jobs over a small worker pool. job(i) must only write to slot i.
void parallel_for(int count, int threads, const std::function<void(int)>& job);

/// Multi-start search: each restart draws a random start, descends on the
/// quadratic-penalty objective, then tightens the fidelity constraint with an
/// augmented Lagrangian so that the returned point sits on the feasible side.
/// Never throws for an unconverged search; check `converged`.
DesignResult optimize(const DesignProblem& problem, const OptimizeOptions& options = {});

}  // namespace freqgate::design
