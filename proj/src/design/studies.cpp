#include "freqgate/design/studies.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <random>
#include <stdexcept>

#include "freqgate/cascade.hpp"
#include "freqgate/design/lbfgs.hpp"
#include "freqgate/design/objective.hpp"
#include "freqgate/design/optimize.hpp"

namespace freqgate::design {

Metrics passband_truncation_check(const DesignResult& result, int kept_modes) {
  const DesignProblem& problem = result.problem;
  const ModeLattice& lattice = problem.lattice;
  const int m = lattice.mode_count();
  if (kept_modes > m) throw std::invalid_argument("passband: kept modes exceed the lattice");
  if (kept_modes < lattice.dim()) {
    throw std::invalid_argument("passband: " + std::to_string(kept_modes) +
                                " kept modes cannot hold a window of " + std::to_string(lattice.dim()));
  }
  const int begin = std::clamp(lattice.window_offset() + lattice.dim() / 2 - kept_modes / 2, 0, m - kept_modes);
  const ShaperPattern shaper = result.parameters.shaper_pattern(m, problem.shaper_begin())
                                   .with_passband(begin, begin + kept_modes);
  const TransferMatrix v =
      compose_cascade(result.parameters.first_drive(), shaper, result.parameters.second_drive(), lattice);
  return metrics_of(truncate(v), problem.target);
}

Metrics parallel_gate_metrics(const DesignResult& result, int separation) {
  if (separation < 0) throw std::invalid_argument("parallel gates: windows overlap (separation < 0)");
  const DesignProblem& problem = result.problem;
  const int m = problem.lattice.mode_count();
  const int d = problem.lattice.dim();
  const int span = 2 * d + separation;
  if (span > m) throw std::invalid_argument("parallel gates: two windows do not fit the lattice");

  const ModeLattice a = problem.lattice.with_offset((m - span) / 2);
  const ModeLattice b = problem.lattice.with_offset(a.window_offset() + d + separation);
  const int begin_a = problem.shaper_begin(a);
  const int begin_b = problem.shaper_begin(b);
  const auto& pattern = result.parameters.shaper;
  auto phase_from = [&](int begin, int j) {
    const int i = j - begin;
    return (i >= 0 && i < static_cast<int>(pattern.size())) ? pattern[static_cast<std::size_t>(i)] : 0.0;
  };
  // Bins up to `boundary` belong to gate A. Gate B's pattern is offset to be
  // continuous across that bin.
  const int boundary = a.window_end() - 1 + separation / 2;
  const double offset = phase_from(begin_a, boundary) - phase_from(begin_b, boundary);
  std::vector<double> phases(static_cast<std::size_t>(m));
  for (int j = 0; j < m; ++j) {
    phases[static_cast<std::size_t>(j)] =
        j <= boundary ? phase_from(begin_a, j) : wrap_phase(phase_from(begin_b, j) + offset);
  }

  const auto layers = CascadeLayers::from(result.parameters.first_drive(), ShaperPattern(std::move(phases)),
                                          result.parameters.second_drive(), m);
  std::vector<int> modes(static_cast<std::size_t>(2 * d));
  std::iota(modes.begin(), modes.begin() + d, a.window_offset());
  std::iota(modes.begin() + d, modes.end(), b.window_offset());
  const Eigen::MatrixXcd v = CascadeEngine(m).block(layers, modes);

  const Eigen::MatrixXcd& u = problem.target.matrix();
  const cplx ta = (v.topLeftCorner(d, d).conjugate().cwiseProduct(u)).sum();
  const cplx tb = (v.bottomRightCorner(d, d).conjugate().cwiseProduct(u)).sum();
  const double s = v.squaredNorm();
  const double overlap = std::abs(ta) + std::abs(tb);
  return {overlap * overlap / (s * 2.0 * d), s / (2.0 * d)};
}

DesignProblem scaling_problem(int dim, const ScalingOptions& options) {
  DesignProblem p;
  p.target = dft_target(dim);
  p.lattice = ModeLattice(options.mode_count, dim);
  p.harmonics = dim - 1;
  p.fidelity_floor = options.fidelity_floor;
  p.shaper_window = options.shaper_window;
  p.restarts = options.restarts;
  p.iteration_budget = options.iteration_budget;
  p.master_seed = options.master_seed;
  p.goal = Goal::product;
  p.start = StartStrategy::mirrored;
  p.start_amplitude_max = std::numbers::pi;
  p.screen_iterations = options.screen_iterations;
  p.polish_count = options.polish_count;
  return p;
}

std::vector<ScalingRow> scaling_study(int d_max, const ScalingOptions& options,
                                      std::vector<DesignResult>* results) {
  if (d_max < 2 || d_max > 7) throw std::invalid_argument("scaling study: d_max must lie in [2, 7]");
  std::vector<ScalingRow> rows;
  for (int d = 2; d <= d_max; ++d) {
    DesignResult r = optimize(scaling_problem(d, options), {options.threads});
    rows.push_back({d, d - 1, r.fidelity, r.success_probability, r.fidelity * r.success_probability,
                    r.converged, r.wall_time_s});
    if (results) results->push_back(std::move(r));
  }
  return rows;
}

void SingleEomProblem::validate() const {
  if (dim < 2) throw std::invalid_argument("single EOM: dimension must be >= 2");
  // Validates M against d.
  (void)ModeLattice(mode_count, dim);
  if (harmonics < 1 || 4 * harmonics > mode_count) {
    throw std::invalid_argument("single EOM: harmonics must lie in [1, M/4]");
  }
  if (restarts < 1 || iteration_budget < 1) {
    throw std::invalid_argument("single EOM: restarts and iteration budget must be >= 1");
  }
  if (!(balance_tolerance > 0.0)) throw std::invalid_argument("single EOM: balance tolerance must be > 0");
}

namespace {

class SingleEomEvaluator {
 public:
  explicit SingleEomEvaluator(const SingleEomProblem& problem)
      : p_(problem.harmonics),
        m_(problem.mode_count),
        d_(problem.dim),
        modes_(static_cast<std::size_t>(problem.dim)),
        engine_(problem.mode_count) {
    std::iota(modes_.begin(), modes_.end(), ModeLattice::centered_offset(m_, d_));
  }

  CascadeLayers layers(std::span<const double> x) const {
    CascadeLayers out = CascadeLayers::identity(m_);
    for (int j = 0; j < m_; ++j) {
      double phi = 0.0;
      for (int k = 0; k < p_; ++k) {
        phi += x[static_cast<std::size_t>(k)] *
               std::sin(2.0 * std::numbers::pi * (k + 1) * j / m_ + x[static_cast<std::size_t>(p_ + k)]);
      }
      out.first[j] = std::polar(1.0, phi);
    }
    return out;
  }

  Eigen::MatrixXcd block(std::span<const double> x) const { return engine_.block(layers(x), modes_); }

  /// -P + sum w h + (rho/2) sum h^2 with h_mn = |V_mn|^2 - S/d^2.
  double loss(std::span<const double> x, const Eigen::MatrixXd& lambda, double rho,
              std::span<double> grad) const {
    const double dd = static_cast<double>(d_) * d_;
    double value = 0.0;
    auto adjoint = [&](const Eigen::MatrixXcd& v) -> Eigen::MatrixXcd {
      const double s = v.squaredNorm();
      const Eigen::MatrixXd h = v.cwiseAbs2().array() - s / dd;
      value = -s / d_ + (lambda.cwiseProduct(h)).sum() + 0.5 * rho * h.squaredNorm();
      const Eigen::MatrixXd w = lambda + rho * h;
      const Eigen::MatrixXcd gamma_s = 2.0 * v.conjugate();
      return (-1.0 / d_ - w.sum() / dd) * gamma_s + 2.0 * w.cast<cplx>().cwiseProduct(v.conjugate());
    };
    LayerPhaseGradient lg;
    engine_.block_with_gradient(layers(x), modes_, adjoint, lg);
    for (int k = 0; k < p_; ++k) {
      const double beta = x[static_cast<std::size_t>(k)];
      const double theta = x[static_cast<std::size_t>(p_ + k)];
      double db = 0.0, dt = 0.0;
      for (int j = 0; j < m_; ++j) {
        const double a = 2.0 * std::numbers::pi * (k + 1) * j / m_ + theta;
        db += lg.first[j] * std::sin(a);
        dt += lg.first[j] * std::cos(a);
      }
      grad[static_cast<std::size_t>(k)] = db;
      grad[static_cast<std::size_t>(p_ + k)] = beta * dt;
    }
    return value;
  }

  int dim() const { return d_; }

 private:
  int p_, m_, d_;
  std::vector<int> modes_;
  CascadeEngine engine_;
};

double imbalance_of(const Eigen::MatrixXcd& v) {
  const double mean = v.squaredNorm() / static_cast<double>(v.size());
  if (mean == 0.0) return std::numeric_limits<double>::infinity();
  return (v.cwiseAbs2().array() / mean - 1.0).abs().maxCoeff();
}

}  // namespace

SingleEomResult single_eom_search(const SingleEomProblem& problem, int threads) {
  problem.validate();
  const SingleEomEvaluator eval(problem);
  const int p = problem.harmonics;
  const int d = problem.dim;

  struct Run {
    std::vector<double> x;
    double success = 0.0;
    double imbalance = 0.0;
  };
  std::vector<Run> runs(static_cast<std::size_t>(problem.restarts));
  parallel_for(problem.restarts, threads, [&](int index) {
    auto rng = restart_rng(problem.master_seed, static_cast<std::uint64_t>(index));
    std::uniform_real_distribution<double> phase(-std::numbers::pi, std::numbers::pi);
    std::uniform_real_distribution<double> amplitude(0.0, problem.start_amplitude_max);
    std::vector<double> x(static_cast<std::size_t>(2 * p));
    for (int k = 0; k < p; ++k) x[static_cast<std::size_t>(k)] = amplitude(rng) / (k + 1);
    for (int k = 0; k < p; ++k) x[static_cast<std::size_t>(p + k)] = phase(rng);

    Eigen::MatrixXd lambda = Eigen::MatrixXd::Zero(d, d);
    double rho = 2.0 * kPenaltyWeight;
    LbfgsOptions opts;
    opts.max_iterations = problem.iteration_budget;
    const GradientFunction f = [&](std::span<const double> v, std::span<double> g) {
      return eval.loss(v, lambda, rho, g);
    };
    minimize_lbfgs(f, x, opts);
    double previous = std::numeric_limits<double>::infinity();
    for (int outer = 0; outer < 40; ++outer) {
      const Eigen::MatrixXcd v = eval.block(x);
      const double imbalance = imbalance_of(v);
      if (imbalance < 0.1 * problem.balance_tolerance) break;
      const double s = v.squaredNorm();
      lambda += rho * (v.cwiseAbs2().array() - s / (d * d)).matrix();
      if (imbalance > 0.25 * previous) rho = std::min(rho * 10.0, 1e12);
      previous = imbalance;
      minimize_lbfgs(f, x, opts);
    }
    const Eigen::MatrixXcd v = eval.block(x);
    runs[static_cast<std::size_t>(index)] = {x, success_probability(v), imbalance_of(v)};
  });

  SingleEomResult out;
  out.dim = d;
  out.ceiling = single_eom_success_ceiling(d);
  out.scatter_bound = scatter_bound(d);
  int best = -1;
  for (int i = 0; i < problem.restarts; ++i) {
    const Run& r = runs[static_cast<std::size_t>(i)];
    const bool ok = r.imbalance <= problem.balance_tolerance;
    out.restart_success.push_back(ok ? r.success : std::numeric_limits<double>::quiet_NaN());
    if (ok && (best < 0 || r.success > runs[static_cast<std::size_t>(best)].success)) best = i;
  }
  out.balanced = best >= 0;
  if (best < 0) {
    best = 0;
    for (int i = 1; i < problem.restarts; ++i) {
      if (runs[static_cast<std::size_t>(i)].imbalance < runs[static_cast<std::size_t>(best)].imbalance) best = i;
    }
  }
  const Run& w = runs[static_cast<std::size_t>(best)];
  out.winner = best;
  out.success_probability = w.success;
  out.imbalance = w.imbalance;
  std::vector<Harmonic> harmonics;
  for (int k = 0; k < p; ++k) {
    const double beta = w.x[static_cast<std::size_t>(k)];
    const double theta = w.x[static_cast<std::size_t>(p + k)];
    harmonics.push_back({k + 1, std::abs(beta), beta < 0.0 ? theta + std::numbers::pi : theta});
  }
  out.drive = FourierDrive(std::move(harmonics));
  return out;
}

}  // namespace freqgate::design
