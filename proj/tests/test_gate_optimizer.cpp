#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <stdexcept>

#include <gtest/gtest.h>

#include "freqgate/cascade.hpp"
#include "freqgate/design/io.hpp"
#include "freqgate/design/lbfgs.hpp"
#include "freqgate/design/objective.hpp"
#include "freqgate/design/optimize.hpp"
#include "freqgate/design/studies.hpp"
#include "freqgate/metrics.hpp"

using namespace freqgate;
using namespace freqgate::design;

namespace {

// Plain-loop metrics, independent of the library implementation.
struct OracleMetrics {
  double f, p;
};

OracleMetrics oracle_metrics(const Eigen::MatrixXcd& v, const Eigen::MatrixXcd& u) {
  const int d = static_cast<int>(v.rows());
  double s = 0.0;
  std::complex<double> t = 0.0;
  for (int r = 0; r < d; ++r) {
    for (int c = 0; c < d; ++c) {
      s += std::norm(v(r, c));
      t += std::conj(v(r, c)) * u(r, c);
    }
  }
  return {std::norm(t) / (s * d), s / d};
}

DesignProblem hadamard_problem(int restarts = 20) {
  DesignProblem p;
  p.target = hadamard_target();
  p.lattice = ModeLattice(128, 2);
  p.harmonics = 1;
  p.restarts = restarts;
  return p;
}

const DesignResult& hadamard_result() {
  static const DesignResult r = optimize(hadamard_problem(), {1});
  return r;
}

const DesignResult& tritter_result() {
  static const DesignResult r = [] {
    DesignProblem p;
    p.target = dft_target(3);
    p.lattice = ModeLattice(128, 3);
    p.harmonics = 2;
    p.restarts = 4;
    return optimize(p, {1});
  }();
  return r;
}

std::vector<double> random_point(const DesignProblem& p, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  std::vector<double> x(static_cast<std::size_t>(p.parameter_count()));
  for (double& v : x) v = u(rng);
  return x;
}

}  // namespace

TEST(Lbfgs, Rosenbrock) {
  const GradientFunction f = [](std::span<const double> x, std::span<double> g) {
    const double a = 1.0 - x[0], b = x[1] - x[0] * x[0];
    g[0] = -2.0 * a - 400.0 * x[0] * b;
    g[1] = 200.0 * b;
    return a * a + 100.0 * b * b;
  };
  std::vector<double> x{-1.2, 1.0};
  const LbfgsReport r = minimize_lbfgs(f, x);
  EXPECT_NEAR(x[0], 1.0, 1e-7);
  EXPECT_NEAR(x[1], 1.0, 1e-7);
  EXPECT_LT(r.value, 1e-14);
}

TEST(Lbfgs, QuadraticInManyDimensions) {
  const int n = 50;
  const GradientFunction f = [&](std::span<const double> x, std::span<double> g) {
    double v = 0.0;
    for (int i = 0; i < n; ++i) {
      const double w = 1.0 + i;
      g[static_cast<std::size_t>(i)] = w * (x[static_cast<std::size_t>(i)] - 1.0);
      v += 0.5 * w * (x[static_cast<std::size_t>(i)] - 1.0) * (x[static_cast<std::size_t>(i)] - 1.0);
    }
    return v;
  };
  std::vector<double> x(static_cast<std::size_t>(n), 0.0);
  const LbfgsReport r = minimize_lbfgs(f, x);
  EXPECT_TRUE(r.converged);
  for (double v : x) EXPECT_NEAR(v, 1.0, 1e-9);
}

TEST(ParameterVector, LengthMatchesCounts) {
  EXPECT_EQ(ParameterVector::zeros(128, 1).size(), 132u);
  EXPECT_EQ(ParameterVector::zeros(128, 2).size(), 136u);
  DesignProblem p = hadamard_problem();
  EXPECT_EQ(p.parameter_count(), 32 + 4);
}

TEST(ParameterVector, CanonicalFormKeepsTheCascade) {
  DesignProblem p = hadamard_problem();
  std::vector<double> x = random_point(p, 3);
  x[32] = -0.9;  // negative amplitude
  x[32 + 1] = 7.0;  // unwrapped phase
  x[0] = -11.0;
  const ParameterVector v = ParameterVector::from_flat(x, p.shaper_window, p.harmonics);
  EXPECT_GE(v.first_amplitudes[0], 0.0);
  for (double t : v.shaper) {
    EXPECT_GT(t, -std::numbers::pi);
    EXPECT_LE(t, std::numbers::pi);
  }
  EXPECT_GT(v.first_phases[0], -std::numbers::pi);
  EXPECT_LE(v.first_phases[0], std::numbers::pi);
  const DesignEvaluator eval(p);
  const Eigen::MatrixXcd raw = eval.block(x);
  const Eigen::MatrixXcd canon = truncate(build_cascade(v, p));
  EXPECT_LT((raw - canon).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_EQ(ParameterVector::from_flat(v.flat(), p.shaper_window, p.harmonics), v);
}

TEST(ParameterVector, SizeMismatchThrows) {
  EXPECT_THROW(ParameterVector::from_flat(std::vector<double>(5), 2, 1), std::invalid_argument);
  DesignProblem p = hadamard_problem();
  EXPECT_THROW(objective(ParameterVector::zeros(16, 1), p), std::invalid_argument);
  const DesignEvaluator eval(p);
  EXPECT_THROW(eval.block(std::vector<double>(3)), std::invalid_argument);
}

TEST(DesignProblem, Validation) {
  DesignProblem p = hadamard_problem();
  EXPECT_NO_THROW(p.validate());
  auto bad = [&](auto mutate) {
    DesignProblem q = p;
    mutate(q);
    EXPECT_THROW(q.validate(), std::invalid_argument);
  };
  bad([](DesignProblem& q) { q.fidelity_floor = 1.0; });
  bad([](DesignProblem& q) { q.fidelity_floor = 0.0; });
  bad([](DesignProblem& q) { q.harmonics = 0; });
  bad([](DesignProblem& q) { q.harmonics = 33; });
  bad([](DesignProblem& q) { q.shaper_window = 129; });
  bad([](DesignProblem& q) { q.restarts = 0; });
  bad([](DesignProblem& q) { q.target = dft_target(3); });
  bad([](DesignProblem& q) { q.screen_iterations = 10; });
}

TEST(Objective, ZeroParametersOnHadamard) {
  // Idle drives and a flat shaper give V = I, so the block is the identity.
  DesignProblem p = hadamard_problem();
  const OracleMetrics m = oracle_metrics(Eigen::MatrixXcd::Identity(2, 2), p.target.matrix());
  EXPECT_NEAR(m.f, 0.0, 1e-15);
  EXPECT_NEAR(m.p, 1.0, 1e-15);
  const double expected = -m.p + 1e4 * (0.9999 - m.f) * (0.9999 - m.f);
  EXPECT_NEAR(objective(ParameterVector::zeros(32, 1), p), expected, 1e-9);
}

TEST(Objective, PenaltyInactiveAboveFloor) {
  DesignProblem p = hadamard_problem();
  EXPECT_DOUBLE_EQ(objective_value({0.99995, 0.9}, p), -0.9);
  EXPECT_DOUBLE_EQ(objective_value({0.9999, 0.9}, p), -0.9);
  EXPECT_NEAR(objective_value({0.9998, 0.9}, p), -0.9 + 1e4 * 1e-8, 1e-15);
  p.goal = Goal::product;
  EXPECT_DOUBLE_EQ(objective_value({0.99995, 0.9}, p), -0.99995 * 0.9);
}

TEST(Objective, FastEvaluatorMatchesComposeCascade) {
  DesignProblem p = tritter_result().problem;
  const std::vector<double> x = random_point(p, 11);
  const DesignEvaluator eval(p);
  const Metrics fast = eval.metrics(x);
  const Metrics slow = evaluate(ParameterVector::from_flat(x, p.shaper_window, p.harmonics), p);
  EXPECT_NEAR(fast.fidelity, slow.fidelity, 1e-12);
  EXPECT_NEAR(fast.success_probability, slow.success_probability, 1e-12);
  const auto block = truncate(build_cascade(ParameterVector::from_flat(x, p.shaper_window, p.harmonics), p));
  const OracleMetrics o = oracle_metrics(block, p.target.matrix());
  EXPECT_NEAR(fast.fidelity, o.f, 1e-12);
  EXPECT_NEAR(fast.success_probability, o.p, 1e-12);
}

class LossGradient : public ::testing::TestWithParam<std::tuple<int, Goal, double>> {};

TEST_P(LossGradient, MatchesCentralDifferences) {
  const auto [d, goal, multiplier] = GetParam();
  DesignProblem p;
  p.target = d == 2 ? hadamard_target() : dft_target(d);
  p.lattice = ModeLattice(64, d);
  p.harmonics = d - 1;
  p.shaper_window = 12;
  p.goal = goal;
  const DesignEvaluator eval(p);
  const std::vector<double> x = random_point(p, 100 + d);
  // Floor above any reachable F keeps the constraint term active.
  const ConstraintTerm term{0.9999, multiplier, 2e4};
  std::vector<double> g(x.size());
  eval.loss(x, term, g);
  const double h = 1e-6;
  for (std::size_t i = 0; i < x.size(); ++i) {
    std::vector<double> xp = x, xm = x;
    xp[i] += h;
    xm[i] -= h;
    const double fd = (eval.loss(xp, term, {}) - eval.loss(xm, term, {})) / (2.0 * h);
    EXPECT_NEAR(g[i], fd, 1e-5 * std::max(1.0, std::abs(fd))) << "parameter " << i;
  }
}

INSTANTIATE_TEST_SUITE_P(Goals, LossGradient,
                         ::testing::Values(std::tuple{2, Goal::success, 0.0},
                                           std::tuple{3, Goal::success, 5.0},
                                           std::tuple{3, Goal::product, 0.0},
                                           std::tuple{4, Goal::product, 1.0}));

TEST(Optimize, HadamardRegression) {
  const DesignResult& r = hadamard_result();
  EXPECT_TRUE(r.converged);
  EXPECT_GE(r.fidelity, 0.9999);
  EXPECT_NEAR(r.success_probability, 0.9760, 0.002);
  EXPECT_LT(std::abs(r.aliasing.delta_fidelity), 1e-6);
  EXPECT_LT(std::abs(r.aliasing.delta_success), 1e-6);
  EXPECT_EQ(r.aliasing.mode_count, 256);
}

TEST(Optimize, TritterRegression) {
  const DesignResult& r = tritter_result();
  EXPECT_TRUE(r.converged);
  EXPECT_GE(r.fidelity, 0.9999);
  EXPECT_GE(r.success_probability, 0.971);
  EXPECT_LE(r.success_probability, 0.976);
}

TEST(Optimize, RecomputationConsistency) {
  for (const DesignResult* r : {&hadamard_result(), &tritter_result()}) {
    const Eigen::MatrixXcd block = truncate(build_cascade(r->parameters, r->problem));
    const OracleMetrics o = oracle_metrics(block, r->problem.target.matrix());
    EXPECT_NEAR(r->fidelity, o.f, 1e-10);
    EXPECT_NEAR(r->success_probability, o.p, 1e-10);
  }
}

TEST(Optimize, WinnerIsBestOf) {
  const DesignResult& r = hadamard_result();
  ASSERT_EQ(r.restarts.size(), 20u);
  for (const auto& s : r.restarts) {
    EXPECT_LE(r.objective, s.objective);
    if (s.objective == r.objective) EXPECT_GE(s.index, r.winner);
  }
  EXPECT_EQ(r.objective, r.restarts[static_cast<std::size_t>(r.winner)].objective);
}

TEST(Optimize, ConvergedMeansFeasible) {
  for (const DesignResult* r : {&hadamard_result(), &tritter_result()}) {
    if (r->converged) EXPECT_GE(r->fidelity, r->problem.fidelity_floor - 1e-6);
    for (const auto& s : r->restarts) {
      EXPECT_EQ(s.feasible, s.fidelity >= r->problem.fidelity_floor - 1e-6);
    }
  }
}

TEST(Optimize, DeterministicAcrossThreadCounts) {
  DesignProblem p = hadamard_problem(5);
  p.master_seed = 77;
  const DesignResult a = optimize(p, {1});
  const DesignResult b = optimize(p, {3});
  EXPECT_EQ(a.parameters, b.parameters);
  EXPECT_EQ(a.winner, b.winner);
  EXPECT_EQ(a.fidelity, b.fidelity);
  EXPECT_EQ(a.success_probability, b.success_probability);
  p.master_seed = 78;
  const DesignResult c = optimize(p, {1});
  EXPECT_NE(a.restarts[0].objective, c.restarts[0].objective);
}

TEST(Optimize, ExhaustedBudgetIsFlaggedNotThrown) {
  DesignProblem p = hadamard_problem(1);
  p.target = dft_target(3);
  p.lattice = ModeLattice(128, 3);
  p.iteration_budget = 1;
  DesignResult r;
  ASSERT_NO_THROW(r = optimize(p, {1}));
  EXPECT_FALSE(r.converged);
  EXPECT_LT(r.fidelity, 0.9999);
}

TEST(Optimize, ScreeningPolishesOnlyTheBest) {
  DesignProblem p = hadamard_problem(6);
  p.screen_iterations = 20;
  p.polish_count = 2;
  const DesignResult r = optimize(p, {1});
  int polished = 0;
  for (const auto& s : r.restarts) polished += s.polished ? 1 : 0;
  EXPECT_EQ(polished, 2);
  EXPECT_TRUE(r.restarts[static_cast<std::size_t>(r.winner)].polished);
  EXPECT_TRUE(r.converged);
}

TEST(Optimize, HadamardDrivePower) {
  const DesignResult& r = hadamard_result();
  const double v_pi[] = {5.37};
  EXPECT_NEAR(rf_power_dbm(r.parameters.first_drive(), v_pi), 12.9, 0.5);
  EXPECT_NEAR(rf_power_dbm(r.parameters.second_drive(), v_pi), 12.9, 0.5);
}

TEST(Passband, FullWidthIsIdentical) {
  for (const DesignResult* r : {&hadamard_result(), &tritter_result()}) {
    const Metrics m = passband_truncation_check(*r, r->problem.lattice.mode_count());
    EXPECT_EQ(m.fidelity, r->fidelity);
    EXPECT_EQ(m.success_probability, r->success_probability);
  }
}

TEST(Passband, NarrowBandsChangeLittle) {
  // Wider than the 8- and 16-mode bands so the check does not hinge on the sixth digit.
  const Metrics bs = passband_truncation_check(hadamard_result(), 10);
  EXPECT_NEAR(bs.fidelity, hadamard_result().fidelity, 1e-6);
  EXPECT_NEAR(bs.success_probability, hadamard_result().success_probability, 1e-6);
  const Metrics tr = passband_truncation_check(tritter_result(), 16);
  EXPECT_NEAR(tr.fidelity, tritter_result().fidelity, 1e-6);
  EXPECT_NEAR(tr.success_probability, tritter_result().success_probability, 1e-6);
}

TEST(Passband, Errors) {
  EXPECT_THROW(passband_truncation_check(hadamard_result(), 1), std::invalid_argument);
  EXPECT_THROW(passband_truncation_check(hadamard_result(), 129), std::invalid_argument);
}

TEST(ParallelGates, FarApartMatchesSingleGate) {
  for (const DesignResult* r : {&hadamard_result(), &tritter_result()}) {
    for (int sep : {16, 24, 40}) {
      const Metrics m = parallel_gate_metrics(*r, sep);
      EXPECT_NEAR(m.fidelity, r->fidelity, 1e-4) << sep;
      EXPECT_NEAR(m.success_probability, r->success_probability, 1e-4) << sep;
    }
  }
}

TEST(ParallelGates, AdjacentGatesDegrade) {
  const double asymptote = parallel_gate_metrics(hadamard_result(), 32).fidelity;
  EXPECT_LT(parallel_gate_metrics(hadamard_result(), 0).fidelity, asymptote - 1e-3);
  EXPECT_NEAR(parallel_gate_metrics(hadamard_result(), 4).fidelity, asymptote, 1e-4);
}

TEST(ParallelGates, Errors) {
  EXPECT_THROW(parallel_gate_metrics(hadamard_result(), -1), std::invalid_argument);
  EXPECT_THROW(parallel_gate_metrics(hadamard_result(), 125), std::invalid_argument);
}

TEST(Scaling, SmallDimensions) {
  ScalingOptions opts;
  opts.restarts = 12;
  opts.threads = 1;
  std::vector<DesignResult> results;
  const auto rows = scaling_study(3, opts, &results);
  ASSERT_EQ(rows.size(), 2u);
  // DFT(2) is the Hadamard target; maximizing F P can only beat the P-first design.
  EXPECT_LT((results[0].problem.target.matrix() - hadamard_target().matrix()).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_GE(rows[0].product, hadamard_result().fidelity * hadamard_result().success_probability - 1e-9);
  EXPECT_GE(rows[1].product, 0.972);
  for (const auto& row : rows) {
    EXPECT_EQ(row.harmonics, row.dim - 1);
    EXPECT_TRUE(row.converged);
    EXPECT_NEAR(row.product, row.fidelity * row.success_probability, 1e-15);
  }
  const std::string csv = scaling_csv(rows);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "d,p,fidelity,success_probability,product,converged");
}

TEST(Scaling, RangeChecked) {
  EXPECT_THROW(scaling_study(1), std::invalid_argument);
  EXPECT_THROW(scaling_study(8), std::invalid_argument);
}

TEST(SingleEom, StaysUnderTheCeiling) {
  SingleEomProblem p;
  p.restarts = 6;
  const SingleEomResult r = single_eom_search(p, 1);
  EXPECT_TRUE(r.balanced);
  EXPECT_LE(r.imbalance, p.balance_tolerance);
  EXPECT_LE(r.success_probability, 2.0 / 3.0 + 1e-6);
  EXPECT_GT(r.success_probability, 0.5);
  EXPECT_DOUBLE_EQ(r.ceiling, 2.0 / 3.0);
  // The block really is a single Toeplitz EOM on the centered window.
  const ModeLattice lat(p.mode_count, 2);
  const Eigen::MatrixXcd v = truncate(toeplitz_from_drive(r.drive, lat));
  EXPECT_NEAR(success_probability(v), r.success_probability, 1e-12);
}

TEST(SingleEom, Validation) {
  SingleEomProblem p;
  p.harmonics = 33;
  EXPECT_THROW(single_eom_search(p), std::invalid_argument);
  p = {};
  p.dim = 1;
  EXPECT_THROW(single_eom_search(p), std::invalid_argument);
}

TEST(DesignJson, ResultRoundTrip) {
  const DesignResult& r = hadamard_result();
  const json j = result_to_json(r);
  EXPECT_FALSE(j.contains("wall_time_s"));
  const DesignResult back = result_from_json(j);
  EXPECT_EQ(result_to_json(back), j);
  const Metrics m = evaluate(back.parameters, back.problem);
  EXPECT_NEAR(m.fidelity, r.fidelity, 1e-10);
  EXPECT_NEAR(m.success_probability, r.success_probability, 1e-10);
  EXPECT_TRUE(result_to_json(r, true).contains("wall_time_s"));
}

TEST(DesignJson, TargetsAndProblems) {
  EXPECT_EQ(target_to_json(hadamard_target())["kind"], "hadamard");
  EXPECT_EQ(target_to_json(dft_target(4))["kind"], "dft");
  Eigen::MatrixXcd swap(2, 2);
  swap << 0, 1, 1, 0;
  const GateTarget custom(swap, "swap");
  const GateTarget back = target_from_json(target_to_json(custom));
  EXPECT_EQ(back.matrix(), swap);
  EXPECT_EQ(back.name(), "swap");
  EXPECT_THROW(target_from_json(json{{"kind", "nope"}}), std::invalid_argument);

  DesignProblem p = scaling_problem(5, {});
  const DesignProblem q = problem_from_json(problem_to_json(p));
  EXPECT_EQ(problem_to_json(q), problem_to_json(p));
  EXPECT_THROW(problem_from_json(json{{"goal", "fastest"}}), std::invalid_argument);
  EXPECT_THROW(problem_from_json(json{{"fidelity_floor", 1.5}}), std::invalid_argument);
}
