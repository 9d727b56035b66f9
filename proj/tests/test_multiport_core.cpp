#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <random>
#include <vector>

#include "gtest/gtest.h"

#include "freqgate/cascade.hpp"
#include "freqgate/errors.hpp"
#include "freqgate/fourier.hpp"
#include "freqgate/matrix_json.hpp"
#include "freqgate/metrics.hpp"
#include "freqgate/reference_data.hpp"

using namespace freqgate;
using std::numbers::pi;

namespace {

// Coefficient of exp(+i q dw t) in exp(i phi(t)) by a fine trapezoid rule over
// one period (spectrally accurate for smooth periodic integrands). Independent
// of the FFT path: plain std::exp sums on a much finer grid than the lattice.
cplx quadrature_coefficient(const FourierDrive& drive, int q, int samples = 8192) {
  cplx acc{};
  for (int s = 0; s < samples; ++s) {
    const double frac = static_cast<double>(s) / samples;
    acc += std::exp(cplx(0.0, drive.phase_at(frac) - 2.0 * pi * q * frac));
  }
  return acc / static_cast<double>(samples);
}

// Signed Bessel J_n(x), including negative orders.
double bessel_j(int n, double x) {
  const double v = std::cyl_bessel_j(static_cast<double>(std::abs(n)), x);
  return (n < 0 && (n % 2 != 0)) ? -v : v;
}

FourierDrive random_drive(std::mt19937_64& rng, int harmonics) {
  std::uniform_real_distribution<double> amp(0.0, pi), ph(-pi, pi);
  std::vector<double> a(harmonics), t(harmonics);
  for (int k = 0; k < harmonics; ++k) {
    a[k] = amp(rng);
    t[k] = ph(rng);
  }
  return FourierDrive::from_amplitudes_phases(a, t);
}

ShaperPattern random_shaper(std::mt19937_64& rng, int m) {
  std::uniform_real_distribution<double> ph(-pi, pi);
  std::vector<double> p(m);
  for (auto& x : p) x = ph(rng);
  return ShaperPattern(p);
}

// Dense route F D3 F^H D2 F D1 F^H for cross-checking the FFT engine.
Eigen::MatrixXcd dense_cascade(const FourierDrive& d1, const ShaperPattern& s,
                               const FourierDrive& d2, int m) {
  const Eigen::MatrixXcd f = dft_matrix(m);
  const Eigen::MatrixXcd fh = f.adjoint();
  return f * eom_diagonal(d2, m).asDiagonal() * fh * shaper_diagonal(s).asDiagonal() * f *
         eom_diagonal(d1, m).asDiagonal() * fh;
}

}  // namespace

// ---------------------------------------------------------------- DFT

TEST(DftMatrix, SmallSizes) {
  const auto f1 = dft_matrix(1);
  EXPECT_EQ(f1.rows(), 1);
  EXPECT_NEAR(std::abs(f1(0, 0) - cplx(1.0)), 0.0, 1e-15);

  const auto f2 = dft_matrix(2);
  const double s = 1.0 / std::sqrt(2.0);
  EXPECT_NEAR(std::abs(f2(0, 0) - s), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(f2(0, 1) - s), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(f2(1, 0) - s), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(f2(1, 1) + s), 0.0, 1e-15);
}

TEST(DftMatrix, UnitaryByDirectProduct) {
  for (int m : {4, 7, 64}) {
    const auto f = dft_matrix(m);
    Eigen::MatrixXcd prod = Eigen::MatrixXcd::Zero(m, m);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j)
        for (int k = 0; k < m; ++k) prod(i, j) += f(i, k) * std::conj(f(j, k));
    EXPECT_LT((prod - Eigen::MatrixXcd::Identity(m, m)).cwiseAbs().maxCoeff(), 1e-12) << m;
  }
}

TEST(DftMatrix, SignConvention) {
  const auto f = dft_matrix(8);
  EXPECT_NEAR(std::abs(f(1, 1) - std::polar(1.0 / std::sqrt(8.0), -2.0 * pi / 8.0)), 0.0, 1e-15);
}

TEST(DftMatrix, RejectsZero) { EXPECT_THROW(dft_matrix(0), std::invalid_argument); }

TEST(FftPlan, MatchesDenseMatrix) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> g;
  for (int m : {1, 2, 6, 8, 12, 128}) {
    const auto f = dft_matrix(m);
    Eigen::VectorXcd x(m);
    for (int j = 0; j < m; ++j) x[j] = {g(rng), g(rng)};
    std::vector<cplx> a(x.data(), x.data() + m), b = a;
    const FftPlan plan(m);
    plan.forward(a);
    plan.inverse(b);
    const Eigen::VectorXcd fx = f * x, fhx = f.adjoint() * x;
    for (int j = 0; j < m; ++j) {
      EXPECT_NEAR(std::abs(a[j] - fx[j]), 0.0, 1e-12) << "M=" << m;
      EXPECT_NEAR(std::abs(b[j] - fhx[j]), 0.0, 1e-12) << "M=" << m;
    }
  }
}

// ---------------------------------------------------------------- drives

TEST(FourierDrive, ValidatesHarmonics) {
  EXPECT_THROW(FourierDrive({{2, 1.0, 0.0}, {1, 1.0, 0.0}}), std::invalid_argument);
  EXPECT_THROW(FourierDrive({{0, 1.0, 0.0}}), std::invalid_argument);
  EXPECT_THROW(FourierDrive({{1, -0.1, 0.0}}), std::invalid_argument);
  const FourierDrive d({{1, 1.0, 3.0 * pi / 2.0}});
  EXPECT_NEAR(d.harmonics()[0].phase, -pi / 2.0, 1e-15);
  EXPECT_NEAR(wrap_phase(pi), pi, 0.0);
  EXPECT_NEAR(wrap_phase(-pi), pi, 1e-15);
}

TEST(EomDiagonal, ZeroDriveIsIdentity) {
  const auto d = eom_diagonal(FourierDrive{}, 16);
  for (int j = 0; j < 16; ++j) EXPECT_EQ(d[j], cplx(1.0));
}

TEST(EomDiagonal, QuarterPeriodSamples) {
  const auto d = eom_diagonal(FourierDrive::single_tone(pi, 0.0), 4);
  const cplx expected[] = {1.0, std::exp(cplx(0, pi)), 1.0, std::exp(cplx(0, -pi))};
  for (int j = 0; j < 4; ++j) EXPECT_NEAR(std::abs(d[j] - expected[j]), 0.0, 1e-15);
}

TEST(EomDiagonal, UnitModulus) {
  const auto d = eom_diagonal(FourierDrive::single_tone(0.8, 0.4), 128);
  for (int j = 0; j < 128; ++j) EXPECT_NEAR(std::abs(d[j]), 1.0, 1e-15);
}

TEST(EomDiagonal, NyquistViolation) {
  EXPECT_THROW(eom_diagonal(FourierDrive::single_tone(1.0, 0.0, 33), 128), std::invalid_argument);
  EXPECT_NO_THROW(eom_diagonal(FourierDrive::single_tone(1.0, 0.0, 32), 128));
}

// ---------------------------------------------------------------- Toeplitz

TEST(Toeplitz, ZeroDriveIsIdentity) {
  const auto v = toeplitz_from_drive(FourierDrive{}, 32);
  EXPECT_LT((v.entries() - Eigen::MatrixXcd::Identity(32, 32)).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_TRUE(v.unitary());
}

TEST(Toeplitz, SineDriveGivesBesselCoefficients) {
  const int m = 128;
  for (double beta : {0.3, 1.0, 1.4347, 2.4048, 3.0}) {
    const auto drive = FourierDrive::single_tone(beta, 0.0);
    const auto v = toeplitz_from_drive(drive, m).entries();
    const int n0 = m / 2;
    for (int q = -10; q <= 10; ++q) {
      const cplx c = v(n0 + q, n0);
      const cplx oracle = quadrature_coefficient(drive, q);
      EXPECT_NEAR(std::abs(c - oracle), 0.0, 1e-10) << "beta=" << beta << " q=" << q;
      EXPECT_NEAR(c.real(), bessel_j(q, beta), 1e-10);
      EXPECT_NEAR(c.imag(), 0.0, 1e-12);
      EXPECT_NEAR(std::abs(c), std::abs(bessel_j(q, beta)), 1e-10);
    }
    // Locks the direction: mode n feeds n+1 with +J_1(beta).
    EXPECT_NEAR(v(n0 + 1, n0).real(), std::cyl_bessel_j(1.0, beta), 1e-10);
  }
}

TEST(Toeplitz, PhasedMultiToneMatchesQuadrature) {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 5; ++trial) {
    const auto drive = random_drive(rng, 3);
    const auto v = toeplitz_from_drive(drive, 256).entries();
    for (int q = -12; q <= 12; ++q) {
      EXPECT_NEAR(std::abs(v(128 + q, 128) - quadrature_coefficient(drive, q)), 0.0, 1e-10);
    }
  }
}

TEST(Toeplitz, ParsevalAndStructure) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 10; ++trial) {
    const auto drive = random_drive(rng, 2);
    const auto v = toeplitz_from_drive(drive, 128).entries();
    EXPECT_NEAR(v.col(17).squaredNorm(), 1.0, 1e-10);
    for (int r = 1; r < 128; ++r) {
      for (int c = 1; c < 128; ++c) ASSERT_EQ(v(r, c), v(r - 1, c - 1));
    }
  }
}

// ---------------------------------------------------------------- cascade

TEST(Cascade, IdentityComponents) {
  const ModeLattice lat(16, 2);
  const auto v = compose_cascade(FourierDrive{}, ShaperPattern::flat(16), FourierDrive{}, lat);
  EXPECT_LT((v.entries() - Eigen::MatrixXcd::Identity(16, 16)).cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_TRUE(v.unitary());
}

TEST(Cascade, SizeMismatch) {
  EXPECT_THROW(compose_cascade(FourierDrive{}, ShaperPattern::flat(8), FourierDrive{}, ModeLattice(16, 2)),
               std::invalid_argument);
}

TEST(Cascade, MatchesDenseRoute) {
  std::mt19937_64 rng(9);
  for (int m : {8, 64, 128}) {
    const auto d1 = random_drive(rng, 2), d2 = random_drive(rng, 2);
    const auto s = random_shaper(rng, m);
    const auto fast = compose_cascade(d1, s, d2, ModeLattice(m, 2)).entries();
    EXPECT_LT((fast - dense_cascade(d1, s, d2, m)).cwiseAbs().maxCoeff(), 1e-12) << m;
  }
}

TEST(Cascade, NonUnitaryFlagFollowsShaperAmplitudes) {
  const auto s = ShaperPattern::flat(16).with_passband(4, 12);
  const auto v = compose_cascade(FourierDrive::single_tone(1.0, 0.0), s, FourierDrive{}, ModeLattice(16, 2));
  EXPECT_FALSE(v.unitary());
  for (int c = 0; c < 16; ++c) EXPECT_LE(v.entries().col(c).squaredNorm(), 1.0 + 1e-10);
}

TEST(Cascade, ToeplitzEqualsCascadeWithIdleStages) {
  std::mt19937_64 rng(10);
  for (int trial = 0; trial < 5; ++trial) {
    const auto drive = random_drive(rng, 3);
    const ModeLattice lat(128, 2);
    const auto t = toeplitz_from_drive(drive, lat).entries();
    const auto c = compose_cascade(drive, ShaperPattern::flat(128), FourierDrive{}, lat).entries();
    EXPECT_LT((t - c).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(Cascade, UnitarityProperty) {
  std::mt19937_64 rng(2024);
  for (int m : {16, 128, 512, 1024}) {
    const int trials = m > 256 ? 1 : 4;
    for (int t = 0; t < trials; ++t) {
      const auto v = compose_cascade(random_drive(rng, 3), random_shaper(rng, m), random_drive(rng, 3),
                                     ModeLattice(m, 2));
      EXPECT_LT(unitarity_defect(v.entries()), 1e-10) << "M=" << m;
      const double p = success_probability(truncate(v));
      EXPECT_GE(p, 0.0);
      EXPECT_LE(p, 1.0 + 1e-10);
    }
  }
}

TEST(Cascade, TranslationInvariance) {
  std::mt19937_64 rng(77);
  const int m = 128;
  const auto d1 = random_drive(rng, 2), d2 = random_drive(rng, 2);
  const auto s = random_shaper(rng, m);
  const ModeLattice base(m, 3);
  const auto target = dft_target(3);
  const auto v0 = truncate(compose_cascade(d1, s, d2, base));
  for (int shift : {-20, -1, 1, 5, 30}) {
    const auto lat = base.with_offset(base.window_offset() + shift);
    const auto v = truncate(compose_cascade(d1, s.rotated(shift), d2, lat));
    EXPECT_NEAR(success_probability(v), success_probability(v0), 1e-10);
    EXPECT_NEAR(fidelity(v, target), fidelity(v0, target), 1e-10);
  }
}

TEST(Truncate, WindowBlock) {
  const ModeLattice lat(8, 2, 3);
  const TransferMatrix id(Eigen::MatrixXcd::Identity(8, 8), lat, true);
  EXPECT_LT((truncate(id) - Eigen::MatrixXcd::Identity(2, 2)).cwiseAbs().maxCoeff(), 0.0 + 1e-300);

  const auto drive = FourierDrive::single_tone(1.2, 0.0);
  const auto t = toeplitz_from_drive(drive, ModeLattice(64, 2));
  const auto block = truncate(t);
  const cplx c0 = quadrature_coefficient(drive, 0), c1 = quadrature_coefficient(drive, 1),
             cm1 = quadrature_coefficient(drive, -1);
  EXPECT_NEAR(std::abs(block(0, 0) - c0), 0.0, 1e-10);
  EXPECT_NEAR(std::abs(block(1, 1) - c0), 0.0, 1e-10);
  EXPECT_NEAR(std::abs(block(1, 0) - c1), 0.0, 1e-10);
  EXPECT_NEAR(std::abs(block(0, 1) - cm1), 0.0, 1e-10);

  EXPECT_THROW(ModeLattice(8, 2, 7), std::invalid_argument);
  EXPECT_THROW(ModeLattice(6, 4), std::invalid_argument);
  EXPECT_THROW(ModeLattice(9, 2), std::invalid_argument);
}

TEST(CascadeEngine, GradientMatchesFiniteDifferences) {
  const int m = 32;
  std::mt19937_64 rng(5);
  auto layers = CascadeLayers::from(random_drive(rng, 2), random_shaper(rng, m), random_drive(rng, 2), m);
  const std::vector<int> modes{15, 16, 17};
  const auto target = dft_target(3).matrix();
  // L = Re Tr(V^H U) + |V|^2 exercises both conjugate and plain dependence.
  auto loss = [&](const Eigen::MatrixXcd& v) {
    return (v.conjugate().cwiseProduct(target)).sum().real() + v.squaredNorm();
  };
  auto adjoint = [&](const Eigen::MatrixXcd& v) -> Eigen::MatrixXcd {
    return target.conjugate() + 2.0 * v.conjugate();
  };
  const CascadeEngine engine(m);
  LayerPhaseGradient g;
  engine.block_with_gradient(layers, modes, adjoint, g);

  auto perturbed = [&](Eigen::VectorXcd CascadeLayers::*layer, int j, double h) {
    auto l = layers;
    (l.*layer)[j] *= std::polar(1.0, h);
    return loss(engine.block(l, modes));
  };
  const double h = 1e-6;
  for (int j : {0, 7, 16, 31}) {
    EXPECT_NEAR(g.first[j], (perturbed(&CascadeLayers::first, j, h) - perturbed(&CascadeLayers::first, j, -h)) / (2 * h), 1e-7);
    EXPECT_NEAR(g.shaper[j], (perturbed(&CascadeLayers::shaper, j, h) - perturbed(&CascadeLayers::shaper, j, -h)) / (2 * h), 1e-7);
    EXPECT_NEAR(g.second[j], (perturbed(&CascadeLayers::second, j, h) - perturbed(&CascadeLayers::second, j, -h)) / (2 * h), 1e-7);
  }
}

// ---------------------------------------------------------------- metrics

TEST(Metrics, UnitaryHasUnitSuccess) {
  EXPECT_NEAR(success_probability(hadamard_target().matrix()), 1.0, 1e-15);
  EXPECT_NEAR(success_probability(dft_target(5).matrix()), 1.0, 1e-14);
}

TEST(Metrics, MeasuredBeamsplitter) {
  const auto v = reference::measured_beamsplitter();
  EXPECT_NEAR(success_probability(v), 0.9739, 1e-4);
  EXPECT_NEAR(fidelity(v, hadamard_target()), 0.9999, 1e-4);
}

TEST(Metrics, MeasuredTritter) {
  const auto v = reference::measured_tritter();
  EXPECT_NEAR(success_probability(v), 0.9731, 1e-4);
  EXPECT_NEAR(fidelity(v, dft_target(3)), 0.9992, 2e-4);
}

TEST(Metrics, FidelityOfTargetAndScaledTarget) {
  const auto h = hadamard_target();
  EXPECT_NEAR(fidelity(h.matrix(), h), 1.0, 1e-15);
  EXPECT_NEAR(fidelity(0.5 * h.matrix(), h), 1.0, 1e-15);
  EXPECT_NEAR(success_probability(0.5 * h.matrix()), 0.25, 1e-15);
}

TEST(Metrics, FidelityScalarInvariance) {
  std::mt19937_64 rng(8);
  std::normal_distribution<double> g;
  const auto u = dft_target(4);
  for (int t = 0; t < 20; ++t) {
    Eigen::MatrixXcd v(4, 4);
    for (int i = 0; i < 16; ++i) v(i / 4, i % 4) = {g(rng), g(rng)};
    const cplx c(g(rng), g(rng));
    EXPECT_NEAR(fidelity(c * v, u), fidelity(v, u), 1e-12);
    // Proportional to the target iff F = 1.
    EXPECT_NEAR(fidelity(c * u.matrix(), u), 1.0, 1e-12);
    EXPECT_LT(fidelity(v, u), 1.0);
  }
}

TEST(Metrics, FidelityOfZeroIsAnError) {
  EXPECT_THROW(fidelity(Eigen::MatrixXcd::Zero(2, 2), hadamard_target()), DegenerateInput);
  EXPECT_THROW(fidelity(Eigen::MatrixXcd::Zero(3, 3), hadamard_target()), std::invalid_argument);
}

TEST(Metrics, IdentityAgainstHadamard) {
  // Tr(H) = 0, so the unmodulated cascade has zero Hadamard fidelity.
  EXPECT_NEAR(fidelity(Eigen::MatrixXcd::Identity(2, 2), hadamard_target()), 0.0, 1e-15);
}

TEST(Metrics, ScatterBound) {
  EXPECT_EQ(scatter_bound(1), 0.0);
  EXPECT_NEAR(scatter_bound(2), 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(single_eom_success_ceiling(2), 2.0 / 3.0, 1e-15);
  EXPECT_NEAR(scatter_bound(3), 0.4, 1e-15);
  EXPECT_THROW(scatter_bound(0), std::invalid_argument);
}

TEST(Targets, HadamardAndDft) {
  const auto h = hadamard_target().matrix();
  const double s = 1.0 / std::sqrt(2.0);
  EXPECT_NEAR(std::abs(h(1, 1) + s), 0.0, 1e-15);
  const auto d3 = dft_target(3).matrix();
  EXPECT_NEAR(std::abs(d3(1, 2) - std::polar(1.0 / std::sqrt(3.0), 4.0 * pi / 3.0)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(d3(1, 1) - std::polar(1.0 / std::sqrt(3.0), 2.0 * pi / 3.0)), 0.0, 1e-15);
  EXPECT_LT((dft_target(2).matrix() - h).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_THROW(dft_target(1), std::invalid_argument);
  Eigen::MatrixXcd bad(2, 2);
  bad << 1, 0, 0, 2;
  EXPECT_THROW(GateTarget(bad, "custom"), std::invalid_argument);
}

TEST(RfPower, Arithmetic) {
  EXPECT_EQ(rf_power_dbm(0.0, 5.37), -std::numeric_limits<double>::infinity());
  // V_peak = 5.37 V into 50 ohm: 5.37^2 / 100 W = 288.369 mW.
  EXPECT_NEAR(rf_power_dbm(pi, 5.37), 10.0 * std::log10(288.369), 1e-9);
  EXPECT_NEAR(rf_power_dbm(pi, 5.37), 24.6, 0.01);
  EXPECT_THROW(rf_power_dbm(1.0, 0.0), std::invalid_argument);
  const FourierDrive two({{1, 1.0, 0.0}, {2, 1.0, 0.0}});
  const double one = rf_power_dbm(1.0, 5.37);
  EXPECT_NEAR(rf_power_dbm(two, std::vector<double>{5.37}), one + 10.0 * std::log10(2.0), 1e-12);
}

// ---------------------------------------------------------------- JSON

TEST(MatrixJson, RoundTripProperty) {
  std::mt19937_64 rng(3);
  const auto v = compose_cascade(random_drive(rng, 1), random_shaper(rng, 16), random_drive(rng, 1),
                                 ModeLattice(16, 2));
  const auto back = transfer_from_json(transfer_to_json(v));
  EXPECT_EQ(back.lattice(), v.lattice());
  EXPECT_EQ(back.unitary(), v.unitary());
  EXPECT_LT((back.entries() - v.entries()).cwiseAbs().maxCoeff(), 1e-11);
  EXPECT_EQ(transfer_to_json(back).dump(), transfer_to_json(v).dump());
}

TEST(MatrixJson, RejectsRagged) {
  EXPECT_THROW(matrix_from_json(json::parse("[[[1,0],[0,0]],[[1,0]]]")), std::invalid_argument);
}

TEST(Embedding, KeepsColumnsNormalized) {
  const ModeLattice lat(16, 3);
  const auto v = TransferMatrix::embed_window_block(reference::measured_tritter(), lat);
  EXPECT_LT((truncate(v) - reference::measured_tritter()).cwiseAbs().maxCoeff(), 1e-15);
  for (int c = 0; c < 16; ++c) EXPECT_NEAR(v.entries().col(c).squaredNorm(), 1.0, 1e-12);
}
