#include "freqgate/design/objective.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace freqgate::design {

DesignEvaluator::DesignEvaluator(const DesignProblem& problem)
    : DesignEvaluator(problem, problem.lattice) {}

DesignEvaluator::DesignEvaluator(const DesignProblem& problem, const ModeLattice& lattice)
    : problem_(&problem),
      lattice_(lattice),
      begin_(problem.shaper_begin(lattice)),
      modes_(static_cast<std::size_t>(lattice.dim())),
      engine_(lattice.mode_count()) {
  if (lattice.dim() != problem.target.dim()) {
    throw std::invalid_argument("design: lattice window does not match the target");
  }
  std::iota(modes_.begin(), modes_.end(), lattice.window_offset());
  const int m = lattice.mode_count();
  const int p = problem.harmonics;
  sin_.resize(static_cast<std::size_t>(p * m));
  cos_.resize(sin_.size());
  for (int k = 0; k < p; ++k) {
    for (int j = 0; j < m; ++j) {
      const double a = 2.0 * std::numbers::pi * (k + 1) * j / m;
      sin_[static_cast<std::size_t>(k * m + j)] = std::sin(a);
      cos_[static_cast<std::size_t>(k * m + j)] = std::cos(a);
    }
  }
}

CascadeLayers DesignEvaluator::layers(std::span<const double> flat) const {
  const int m = lattice_.mode_count();
  const int w = problem_->shaper_window;
  const int p = problem_->harmonics;
  if (static_cast<int>(flat.size()) != w + 4 * p) {
    throw std::invalid_argument("design: parameter vector has " + std::to_string(flat.size()) +
                                " entries, expected " + std::to_string(w + 4 * p));
  }
  CascadeLayers out = CascadeLayers::identity(m);
  for (int i = 0; i < w; ++i) out.shaper[begin_ + i] = std::polar(1.0, flat[static_cast<std::size_t>(i)]);
  std::vector<double> phi(static_cast<std::size_t>(m));
  auto drive = [&](int at, Eigen::VectorXcd& diag) {
    std::fill(phi.begin(), phi.end(), 0.0);
    for (int k = 0; k < p; ++k) {
      const double beta = flat[static_cast<std::size_t>(at + k)];
      const double theta = flat[static_cast<std::size_t>(at + p + k)];
      const double bc = beta * std::cos(theta), bs = beta * std::sin(theta);
      const double* sa = sin_.data() + k * m;
      const double* ca = cos_.data() + k * m;
      for (int j = 0; j < m; ++j) phi[static_cast<std::size_t>(j)] += bc * sa[j] + bs * ca[j];
    }
    for (int j = 0; j < m; ++j) diag[j] = std::polar(1.0, phi[static_cast<std::size_t>(j)]);
  };
  drive(w, out.first);
  drive(w + 2 * p, out.second);
  return out;
}

Eigen::MatrixXcd DesignEvaluator::block(std::span<const double> flat) const {
  return engine_.block(layers(flat), modes_);
}

Metrics DesignEvaluator::metrics(std::span<const double> flat) const {
  return metrics_of(block(flat), problem_->target);
}

double DesignEvaluator::loss(std::span<const double> flat, const ConstraintTerm& term,
                             std::span<double> grad, Metrics* at) const {
  const auto& u = problem_->target.matrix();
  const double d = lattice_.dim();
  const bool product = problem_->goal == Goal::product;

  // Filled by the adjoint callback, which sees the block first.
  double f = 0.0, p = 0.0, value = 0.0;
  auto adjoint = [&](const Eigen::MatrixXcd& v) -> Eigen::MatrixXcd {
    const double s = v.squaredNorm();
    const cplx t = (v.conjugate().cwiseProduct(u)).sum();
    const double t2 = std::norm(t);
    p = s / d;
    f = s > 0.0 ? t2 / (d * s) : 0.0;
    const double c = term.floor - f;
    const double active = std::max(0.0, term.multiplier + term.rho * c);
    value = (product ? -f * p : -p) + (active * active - term.multiplier * term.multiplier) / (2.0 * term.rho);
    const double dl_df = (product ? -p : 0.0) - active;
    const double dl_dp = product ? -f : -1.0;
    const Eigen::MatrixXcd gamma_s = 2.0 * v.conjugate();
    Eigen::MatrixXcd g = (dl_dp / d) * gamma_s;
    if (s > 0.0) {
      g += dl_df * ((2.0 * t / (d * s)) * u.conjugate() - (t2 / (d * s * s)) * gamma_s);
    }
    return g;
  };

  const CascadeLayers lay = layers(flat);
  if (grad.empty()) {
    adjoint(engine_.block(lay, modes_));
  } else {
    LayerPhaseGradient lg;
    engine_.block_with_gradient(lay, modes_, adjoint, lg);
    const int m = lattice_.mode_count();
    const int w = problem_->shaper_window;
    const int np = problem_->harmonics;
    for (int i = 0; i < w; ++i) grad[static_cast<std::size_t>(i)] = lg.shaper[begin_ + i];
    auto chain = [&](int at, const Eigen::VectorXd& g) {
      for (int k = 0; k < np; ++k) {
        const double beta = flat[static_cast<std::size_t>(at + k)];
        const double theta = flat[static_cast<std::size_t>(at + np + k)];
        const double st = std::sin(theta), ct = std::cos(theta);
        double db = 0.0, dt = 0.0;
        for (int j = 0; j < m; ++j) {
          const double sa = sin_[static_cast<std::size_t>(k * m + j)];
          const double ca = cos_[static_cast<std::size_t>(k * m + j)];
          // sin(a + theta) and cos(a + theta)
          db += g[j] * (sa * ct + ca * st);
          dt += g[j] * (ca * ct - sa * st);
        }
        grad[static_cast<std::size_t>(at + k)] = db;
        grad[static_cast<std::size_t>(at + np + k)] = beta * dt;
      }
    };
    chain(w, lg.first);
    chain(w + 2 * np, lg.second);
  }
  if (at) *at = {f, p};
  return value;
}

Metrics metrics_of(const Eigen::MatrixXcd& block, const GateTarget& target) {
  return {fidelity(block, target), success_probability(block)};
}

double objective_value(const Metrics& metrics, const DesignProblem& problem) {
  const double base = problem.goal == Goal::product ? -metrics.fidelity * metrics.success_probability
                                                    : -metrics.success_probability;
  const double gap = std::max(0.0, problem.fidelity_floor - metrics.fidelity);
  return base + kPenaltyWeight * gap * gap;
}

double objective(const ParameterVector& params, const DesignProblem& problem) {
  return objective_value(evaluate(params, problem), problem);
}

TransferMatrix build_cascade(const ParameterVector& params, const DesignProblem& problem) {
  return build_cascade(params, problem, problem.lattice);
}

TransferMatrix build_cascade(const ParameterVector& params, const DesignProblem& problem,
                             const ModeLattice& lattice) {
  if (params.shaper_window() != problem.shaper_window || params.harmonics() != problem.harmonics) {
    throw std::invalid_argument("design: parameter sizes do not match the problem");
  }
  const ShaperPattern shaper =
      params.shaper_pattern(lattice.mode_count(), problem.shaper_begin(lattice));
  return compose_cascade(params.first_drive(), shaper, params.second_drive(), lattice);
}

Metrics evaluate(const ParameterVector& params, const DesignProblem& problem) {
  return evaluate(params, problem, problem.lattice);
}

Metrics evaluate(const ParameterVector& params, const DesignProblem& problem,
                 const ModeLattice& lattice) {
  return metrics_of(truncate(build_cascade(params, problem, lattice)), problem.target);
}

}  // namespace freqgate::design
