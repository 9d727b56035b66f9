// Acceptance gate: one line per criterion, nonzero exit if any criterion fails.
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "freqgate/app/config.hpp"
#include "freqgate/app/scenarios.hpp"
#include "freqgate/cascade.hpp"
#include "freqgate/design/objective.hpp"
#include "freqgate/design/optimize.hpp"
#include "freqgate/design/studies.hpp"
#include "freqgate/fourier.hpp"
#include "freqgate/lab/apparatus.hpp"
#include "freqgate/lab/counting.hpp"
#include "freqgate/metrics.hpp"
#include "freqgate/reference_data.hpp"

using namespace freqgate;
using std::numbers::pi;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* pattern, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, pattern, x);
  return buf;
}

int failures = 0;

void criterion(int id, const char* name, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("threw: ") + e.what()};
  }
  const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (!o.pass) ++failures;
  std::printf("C%-2d %s  %-28s %s  [%.1f s]\n", id, o.pass ? "PASS" : "FAIL", name, o.detail.c_str(), s);
  std::fflush(stdout);
}

design::DesignProblem beamsplitter_problem() {
  design::DesignProblem p;
  p.restarts = 20;
  return p;
}

design::DesignProblem tritter_problem() {
  design::DesignProblem p;
  p.target = dft_target(3);
  p.lattice = ModeLattice(128, 3);
  p.harmonics = 2;
  p.restarts = 8;
  return p;
}

const design::DesignResult& beamsplitter() {
  static const design::DesignResult r = design::optimize(beamsplitter_problem());
  return r;
}

const design::DesignResult& tritter() {
  static const design::DesignResult r = design::optimize(tritter_problem());
  return r;
}

// First `digits` significant digits agree, read as |a - b| below half a unit
// in the last kept digit of a.
bool same_digits(double a, double b, int digits) {
  const double unit = std::pow(10.0, std::floor(std::log10(std::abs(a))) - (digits - 1));
  return std::abs(a - b) < 0.5 * unit;
}

std::complex<double> quadrature_coefficient(const FourierDrive& drive, int q) {
  constexpr int kSamples = 8192;
  std::complex<double> acc = 0.0;
  for (int s = 0; s < kSamples; ++s) {
    const double frac = static_cast<double>(s) / kSamples;
    acc += std::polar(1.0, drive.phase_at(frac) - 2.0 * pi * q * frac);
  }
  return acc / static_cast<double>(kSamples);
}

FourierDrive random_drive(std::mt19937_64& rng, int harmonics) {
  std::uniform_real_distribution<double> amp(0.0, pi), ph(-pi, pi);
  std::vector<double> a(static_cast<std::size_t>(harmonics)), t(static_cast<std::size_t>(harmonics));
  for (int k = 0; k < harmonics; ++k) {
    a[static_cast<std::size_t>(k)] = amp(rng);
    t[static_cast<std::size_t>(k)] = ph(rng);
  }
  return FourierDrive::from_amplitudes_phases(a, t);
}

ShaperPattern random_shaper(std::mt19937_64& rng, int m) {
  std::uniform_real_distribution<double> ph(-pi, pi);
  std::vector<double> p(static_cast<std::size_t>(m));
  for (auto& x : p) x = ph(rng);
  return ShaperPattern(p);
}

Eigen::MatrixXcd random_phase_diag(int m, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-pi, pi);
  Eigen::MatrixXcd d = Eigen::MatrixXcd::Zero(m, m);
  for (int i = 0; i < m; ++i) d(i, i) = std::polar(1.0, u(rng));
  return d;
}

Outcome design_regression(const design::DesignResult& r, double p_lo, double p_hi) {
  const bool ok = r.fidelity >= 0.9999 && r.success_probability >= p_lo && r.success_probability <= p_hi;
  return {ok, "F=" + fmt("%.10f", r.fidelity) + " P=" + fmt("%.6f", r.success_probability) + " (need F>=0.9999, P in [" +
                  fmt("%.3f", p_lo) + "," + fmt("%.3f", p_hi) + "], " + std::to_string(r.problem.restarts) +
                  " restarts)"};
}

}  // namespace

int main() {
  criterion(1, "beamsplitter design", [] { return design_regression(beamsplitter(), 0.974, 0.978); });

  criterion(2, "tritter design", [] { return design_regression(tritter(), 0.971, 0.976); });

  criterion(3, "measured-matrix metrics", [] {
    const auto v2 = reference::measured_beamsplitter();
    const auto v3 = reference::measured_tritter();
    const double p2 = success_probability(v2), f2 = fidelity(v2, hadamard_target());
    const double p3 = success_probability(v3), f3 = fidelity(v3, dft_target(3));
    const bool ok = std::abs(p2 - 0.9739) <= 1e-4 && std::abs(f2 - 0.9999) <= 1e-4 && std::abs(p3 - 0.9731) <= 1e-4 &&
                    std::abs(f3 - 0.9992) <= 2e-4;
    return Outcome{ok, "2x2 P=" + fmt("%.5f", p2) + " F=" + fmt("%.5f", f2) + "; 3x3 P=" + fmt("%.5f", p3) +
                           " F=" + fmt("%.5f", f3)};
  });

  criterion(4, "single-EOM ceiling", [] {
    design::SingleEomProblem p;
    const design::SingleEomResult r = design::single_eom_search(p);
    double best = 0.0;
    for (double x : r.restart_success) {
      if (!std::isnan(x)) best = std::max(best, x);
    }
    const bool below = best <= 2.0 / 3.0 + 1e-6;
    const bool reaches = best >= 0.66;
    return Outcome{below && reaches, "best balanced P=" + fmt("%.6f", best) + " over " +
                                         std::to_string(r.restart_success.size()) + " restarts; <= 2/3+1e-6: " +
                                         (below ? "yes" : "no") + ", >= 0.66: " + (reaches ? "yes" : "no")};
  });

  criterion(5, "DFT scaling d=2..7", [] {
    const auto rows = design::scaling_study(7);
    bool ok = true;
    std::string detail = "F*P:";
    for (const auto& r : rows) {
      ok = ok && r.product > 0.97;
      detail += " " + fmt("%.4f", r.product);
    }
    return Outcome{ok, detail + " (need > 0.97)"};
  });

  criterion(6, "passband truncation", [] {
    const auto& bs = beamsplitter();
    const auto& tr = tritter();
    const design::Metrics b = design::passband_truncation_check(bs, 8);
    const design::Metrics t = design::passband_truncation_check(tr, 16);
    const bool bs_ok = same_digits(bs.fidelity, b.fidelity, 6) && same_digits(bs.success_probability, b.success_probability, 6);
    const bool tr_ok = same_digits(tr.fidelity, t.fidelity, 6) && same_digits(tr.success_probability, t.success_probability, 6);
    return Outcome{bs_ok && tr_ok, "bs(8) dF=" + fmt("%.1e", b.fidelity - bs.fidelity) + " dP=" +
                                       fmt("%.1e", b.success_probability - bs.success_probability) +
                                       (bs_ok ? " ok" : " CHANGED") + "; tr(16) dF=" + fmt("%.1e", t.fidelity - tr.fidelity) +
                                       " dP=" + fmt("%.1e", t.success_probability - tr.success_probability) +
                                       (tr_ok ? " ok" : " CHANGED")};
  });

  criterion(7, "characterization round trip", [] {
    const auto& bs = beamsplitter();
    const TransferMatrix truth = design::build_cascade(bs.parameters, bs.problem);
    const lab::ReconstructedMultiport r = lab::reconstruct(lab::VirtualApparatus(truth), hadamard_target());
    const Eigen::MatrixXcd block = truncate(truth);
    const double df = std::abs(r.fidelity - fidelity(block, hadamard_target()));
    const double dp = std::abs(r.success_probability - success_probability(block));
    std::mt19937_64 rng(11);
    double gauge = 0.0;
    const int m = truth.lattice().mode_count();
    for (int t = 0; t < 3; ++t) {
      const Eigen::MatrixXcd v = random_phase_diag(m, rng) * truth.entries() * random_phase_diag(m, rng);
      const auto g = lab::reconstruct(lab::VirtualApparatus(TransferMatrix(v, truth.lattice(), true)), hadamard_target());
      gauge = std::max(gauge, (g.entries - r.entries).cwiseAbs().maxCoeff());
    }
    return Outcome{df < 1e-9 && dp < 1e-9 && gauge < 1e-9,
                   "|dF|=" + fmt("%.1e", df) + " |dP|=" + fmt("%.1e", dp) + " gauge=" + fmt("%.1e", gauge)};
  });

  criterion(8, "guardband asymptote", [] {
    const auto& bs = beamsplitter();
    const double at4 = design::parallel_gate_metrics(bs, 4).fidelity;
    const double at0 = design::parallel_gate_metrics(bs, 0).fidelity;
    const bool ok = std::abs(bs.fidelity - at4) < 1e-4 && bs.fidelity - at0 > 1e-3;
    return Outcome{ok, "isolated F=" + fmt("%.8f", bs.fidelity) + " sep4=" + fmt("%.8f", at4) + " sep0=" + fmt("%.6f", at0)};
  });

  criterion(9, "visibility Monte Carlo", [] {
    double worst = 1.0;
    for (const design::DesignResult* r : {&beamsplitter(), &tritter()}) {
      const lab::VirtualApparatus app(design::build_cascade(r->parameters, r->problem), 0.0562);
      const int d = r->problem.target.dim();
      for (std::uint64_t seed = 0; seed < 10; ++seed) {
        lab::CountingSettings s;
        s.samples = 20;
        s.seed = seed;
        const lab::CountingScan scan = lab::photon_counting_scan(app, s);
        for (int m = 0; m < d; ++m) worst = std::min(worst, lab::visibility(scan.mode_trace(m), d));
      }
    }
    return Outcome{worst >= 0.97, "min visibility over 5 modes x 10 seeds = " + fmt("%.4f", worst) + " (need >= 0.97)"};
  });

  criterion(10, "property suites", [] {
    std::mt19937_64 rng(2024);
    double unit = 0.0, toep = 0.0, bessel = 0.0, trans = 0.0, scalar = 0.0;
    for (int m : {16, 128, 512}) {
      const auto v = compose_cascade(random_drive(rng, 3), random_shaper(rng, m), random_drive(rng, 3), ModeLattice(m, 2));
      unit = std::max(unit, unitarity_defect(v.entries()));
    }
    for (int t = 0; t < 4; ++t) {
      const auto drive = random_drive(rng, 3);
      const ModeLattice lat(128, 2);
      toep = std::max(toep, (toeplitz_from_drive(drive, lat).entries() -
                             compose_cascade(drive, ShaperPattern::flat(128), FourierDrive{}, lat).entries())
                                .cwiseAbs()
                                .maxCoeff());
    }
    for (double beta : {0.3, 0.817, 1.0578, 2.4048, 4.0}) {
      const auto drive = FourierDrive::single_tone(beta, 0.0);
      const auto t = toeplitz_from_drive(drive, 128).entries();
      for (int n = -8; n <= 8; ++n) {
        const double j = (n < 0 && n % 2 != 0 ? -1.0 : 1.0) * std::cyl_bessel_j(std::abs(n), beta);
        bessel = std::max({bessel, std::abs(t(64 + n, 64) - j), std::abs(t(64 + n, 64) - quadrature_coefficient(drive, n))});
      }
    }
    {
      const auto d1 = random_drive(rng, 2), d2 = random_drive(rng, 2);
      const auto s = random_shaper(rng, 128);
      const ModeLattice base(128, 3);
      const auto v0 = truncate(compose_cascade(d1, s, d2, base));
      for (int shift : {-20, -1, 5, 30}) {
        const auto v = truncate(compose_cascade(d1, s.rotated(shift), d2, base.with_offset(base.window_offset() + shift)));
        trans = std::max({trans, std::abs(success_probability(v) - success_probability(v0)),
                          std::abs(fidelity(v, dft_target(3)) - fidelity(v0, dft_target(3)))});
      }
    }
    {
      std::normal_distribution<double> g;
      for (int t = 0; t < 20; ++t) {
        Eigen::MatrixXcd v(4, 4);
        for (int i = 0; i < 16; ++i) v(i / 4, i % 4) = {g(rng), g(rng)};
        const std::complex<double> c(g(rng), g(rng));
        scalar = std::max(scalar, std::abs(fidelity(c * v, dft_target(4)) - fidelity(v, dft_target(4))));
      }
    }
    const double alias = std::max({std::abs(beamsplitter().aliasing.delta_fidelity),
                                   std::abs(beamsplitter().aliasing.delta_success),
                                   std::abs(tritter().aliasing.delta_fidelity), std::abs(tritter().aliasing.delta_success)});
    app::ScenarioConfig c = app::ScenarioConfig::defaults(app::ScenarioKind::design);
    c.design.restarts = 3;
    const bool determinism = app::run_scenario(c, 1).files == app::run_scenario(c, 3).files;
    const bool ok = unit < 1e-10 && toep < 1e-12 && bessel < 1e-10 && trans < 1e-10 && scalar < 1e-12 && alias < 1e-6 &&
                    determinism;
    return Outcome{ok, "unitarity " + fmt("%.0e", unit) + ", toeplitz " + fmt("%.0e", toep) + ", bessel " +
                           fmt("%.0e", bessel) + ", translation " + fmt("%.0e", trans) + ", scalar " + fmt("%.0e", scalar) +
                           ", aliasing " + fmt("%.0e", alias) + ", determinism " + (determinism ? "bit-exact" : "DIFFERS")};
  });

  std::printf("%d of 10 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
