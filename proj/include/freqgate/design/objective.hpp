#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "freqgate/cascade.hpp"
#include "freqgate/design/problem.hpp"
#include "freqgate/transfer.hpp"

namespace freqgate::design {

/// Constraint term (max(0, mu + rho c)^2 - mu^2) / (2 rho) on c = floor - F.
/// mu = 0, rho = 2 lambda is the plain quadratic penalty.
struct ConstraintTerm {
  double floor = 0.9999;
  double multiplier = 0.0;
  double rho = 2.0 * kPenaltyWeight;

  static ConstraintTerm penalty(double floor) { return {floor, 0.0, 2.0 * kPenaltyWeight}; }
};

/// Fast evaluator over flat (unconstrained) parameter vectors.
class DesignEvaluator {
 public:
  explicit DesignEvaluator(const DesignProblem& problem);
  DesignEvaluator(const DesignProblem& problem, const ModeLattice& lattice);

  const ModeLattice& lattice() const { return lattice_; }

  CascadeLayers layers(std::span<const double> flat) const;
  Eigen::MatrixXcd block(std::span<const double> flat) const;
  Metrics metrics(std::span<const double> flat) const;

  /// Goal loss plus constraint term; fills `grad` when it is non-empty.
  double loss(std::span<const double> flat, const ConstraintTerm& term, std::span<double> grad,
              Metrics* at = nullptr) const;

 private:
  const DesignProblem* problem_;
  ModeLattice lattice_;
  int begin_;
  std::vector<int> modes_;
  CascadeEngine engine_;
  std::vector<double> sin_, cos_;  // [k * M + j] for harmonic k+1
};

Metrics metrics_of(const Eigen::MatrixXcd& block, const GateTarget& target);

/// -P (or -F P) + 1e4 max(0, floor - F)^2 from the given metrics.
double objective_value(const Metrics& metrics, const DesignProblem& problem);

/// Same, evaluated from scratch with compose_cascade.
double objective(const ParameterVector& params, const DesignProblem& problem);

/// Full cascade for the parameters on `lattice` (defaults to the problem's).
TransferMatrix build_cascade(const ParameterVector& params, const DesignProblem& problem);
TransferMatrix build_cascade(const ParameterVector& params, const DesignProblem& problem,
                             const ModeLattice& lattice);

Metrics evaluate(const ParameterVector& params, const DesignProblem& problem);
Metrics evaluate(const ParameterVector& params, const DesignProblem& problem,
                 const ModeLattice& lattice);

}  // namespace freqgate::design
