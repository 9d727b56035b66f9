#include "freqgate/design/optimize.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <mutex>
#include <numbers>
#include <thread>
#include <numeric>

#include "freqgate/design/lbfgs.hpp"
#include "freqgate/design/objective.hpp"
#include "freqgate/rng.hpp"

namespace freqgate::design {
namespace {

// The constraint is solved against floor + margin so that round-off in the
// reported fidelity cannot dip below the floor itself.
constexpr double kFloorMargin = 2e-9;
constexpr int kMaxOuterIterations = 40;

std::vector<double> initial_point(const DesignProblem& problem, int index) {
  auto rng = restart_rng(problem.master_seed, static_cast<std::uint64_t>(index));
  std::uniform_real_distribution<double> phase(-std::numbers::pi, std::numbers::pi);
  std::uniform_real_distribution<double> amplitude(0.0, problem.start_amplitude_max);
  const int w = problem.shaper_window;
  const int p = problem.harmonics;
  std::vector<double> x(static_cast<std::size_t>(problem.parameter_count()));
  auto at = [&](int i) -> double& { return x[static_cast<std::size_t>(i)]; };
  for (int i = 0; i < w; ++i) at(i) = phase(rng);
  if (problem.start == StartStrategy::uniform) {
    for (int first : {w, w + 2 * p}) {
      for (int k = 0; k < p; ++k) at(first + k) = amplitude(rng);
      for (int k = 0; k < p; ++k) at(first + p + k) = phase(rng);
    }
  } else {
    constexpr double kJitter = 0.3;
    std::normal_distribution<double> jitter(0.0, kJitter);
    const double step = std::numbers::pi / problem.lattice.dim();
    for (int k = 0; k < p; ++k) {
      const double a = amplitude(rng) / (k + 1);
      at(w + k) = a;
      at(w + 2 * p + k) = a;
      at(w + p + k) = std::numbers::pi / 2 + (k + 1) * step + jitter(rng);
      at(w + 3 * p + k) = std::numbers::pi / 2 - (k + 1) * step + jitter(rng);
    }
  }
  return x;
}

struct Restart {
  std::vector<double> x;
  LbfgsReport last;
  int iterations = 0;
  int evaluations = 0;
  double screened = 0.0;
  bool polished = false;
};

class RestartRunner {
 public:
  RestartRunner(const DesignProblem& problem, const DesignEvaluator& eval)
      : problem_(problem), eval_(eval) {}

  void descend(Restart& r, const ConstraintTerm& term, int budget) const {
    const GradientFunction f = [&](std::span<const double> v, std::span<double> g) {
      return eval_.loss(v, term, g);
    };
    LbfgsOptions opts;
    opts.max_iterations = budget;
    r.last = minimize_lbfgs(f, r.x, opts);
    r.iterations += r.last.iterations;
    r.evaluations += r.last.evaluations;
  }

  // Penalty descent, then an augmented Lagrangian on c = floor' - F <= 0.
  void polish(Restart& r) const {
    ConstraintTerm term = ConstraintTerm::penalty(problem_.fidelity_floor);
    descend(r, term, problem_.iteration_budget);
    term.floor = problem_.fidelity_floor + kFloorMargin;
    double c = term.floor - eval_.metrics(r.x).fidelity;
    term.multiplier = std::max(0.0, term.rho * c);
    double previous = c;
    for (int outer = 0; outer < kMaxOuterIterations && (c > 0.0 || term.multiplier > 0.0); ++outer) {
      descend(r, term, problem_.iteration_budget);
      c = term.floor - eval_.metrics(r.x).fidelity;
      const double next = std::max(0.0, term.multiplier + term.rho * c);
      const bool settled = std::abs(next - term.multiplier) <= 1e-7 * std::max(1.0, term.multiplier);
      term.multiplier = next;
      if (c <= 0.0 && settled) break;
      if (c > 0.0 && c > 0.25 * previous) term.rho = std::min(term.rho * 10.0, 1e12);
      previous = c;
    }
    r.polished = true;
  }

  void screen(Restart& r) const {
    descend(r, ConstraintTerm::penalty(problem_.fidelity_floor), problem_.screen_iterations);
    r.screened = eval_.loss(r.x, ConstraintTerm::penalty(problem_.fidelity_floor), {});
  }

 private:
  const DesignProblem& problem_;
  const DesignEvaluator& eval_;
};

}  // namespace

std::mt19937_64 restart_rng(std::uint64_t master_seed, std::uint64_t index) {
  return derived_stream(master_seed, stream_domain::restart, index);
}

void parallel_for(int count, int threads, const std::function<void(int)>& job) {
  if (threads <= 0) threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  threads = std::min(threads, count);
  if (threads <= 1) {
    for (int i = 0; i < count; ++i) job(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(threads));
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (int i = next++; i < count; i = next++) {
        try {
          job(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

DesignResult optimize(const DesignProblem& problem, const OptimizeOptions& options) {
  problem.validate();
  const auto start = std::chrono::steady_clock::now();
  const DesignEvaluator eval(problem);

  const RestartRunner runner(problem, eval);
  const int count = problem.restarts;
  std::vector<Restart> runs(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) runs[static_cast<std::size_t>(i)].x = initial_point(problem, i);

  std::vector<int> chosen(static_cast<std::size_t>(count));
  std::iota(chosen.begin(), chosen.end(), 0);
  if (problem.screen_iterations > 0) {
    parallel_for(count, options.threads, [&](int i) { runner.screen(runs[static_cast<std::size_t>(i)]); });
    std::stable_sort(chosen.begin(), chosen.end(), [&](int a, int b) {
      return runs[static_cast<std::size_t>(a)].screened < runs[static_cast<std::size_t>(b)].screened;
    });
    chosen.resize(static_cast<std::size_t>(std::min(problem.polish_count, count)));
  }
  parallel_for(static_cast<int>(chosen.size()), options.threads,
               [&](int i) { runner.polish(runs[static_cast<std::size_t>(chosen[static_cast<std::size_t>(i)])]); });

  DesignResult result;
  result.problem = problem;
  std::vector<ParameterVector> params;
  for (int i = 0; i < count; ++i) {
    const Restart& r = runs[static_cast<std::size_t>(i)];
    params.push_back(ParameterVector::from_flat(r.x, problem.shaper_window, problem.harmonics));
    const Metrics m = eval.metrics(params.back().flat());
    RestartSummary s;
    s.index = i;
    s.fidelity = m.fidelity;
    s.success_probability = m.success_probability;
    s.objective = objective_value(m, problem);
    s.iterations = r.iterations;
    s.evaluations = r.evaluations;
    s.feasible = m.fidelity >= problem.fidelity_floor - 1e-6;
    s.polished = r.polished;
    s.stop_reason = r.last.stop_reason;
    result.restarts.push_back(std::move(s));
  }
  std::size_t best = 0;
  for (std::size_t i = 1; i < result.restarts.size(); ++i) {
    if (result.restarts[i].objective < result.restarts[best].objective) best = i;
  }
  result.parameters = params[best];
  result.winner = static_cast<int>(best);
  result.objective = result.restarts[best].objective;

  const Metrics m = evaluate(result.parameters, problem);
  result.fidelity = m.fidelity;
  result.success_probability = m.success_probability;
  result.converged = m.fidelity >= problem.fidelity_floor - 1e-6;

  const ModeLattice doubled = problem.lattice.resized(2 * problem.lattice.mode_count());
  const Metrics a = evaluate(result.parameters, problem, doubled);
  result.aliasing = {doubled.mode_count(), a.fidelity, a.success_probability,
                     a.fidelity - m.fidelity, a.success_probability - m.success_probability};

  result.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

}  // namespace freqgate::design
