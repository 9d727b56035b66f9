#include "freqgate/lab/counting.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>

#include "freqgate/errors.hpp"
#include "freqgate/rng.hpp"

namespace freqgate::lab {

void Detector::validate() const {
  if (!(efficiency > 0.0 && efficiency <= 1.0)) throw std::invalid_argument("detector: efficiency must lie in (0, 1]");
  if (!(gate_rate_hz > 0.0)) throw std::invalid_argument("detector: gate rate must be positive");
  if (!(gate_duration_s > 0.0 && gate_duration_s * gate_rate_hz <= 1.0)) {
    throw std::invalid_argument("detector: gates must be positive and must not overlap");
  }
  if (!(dark_rate_hz >= 0.0) || !std::isfinite(dark_rate_hz)) {
    throw std::invalid_argument("detector: dark rate must be finite and >= 0");
  }
}

void CountingSettings::validate() const {
  if (!(mean_photons > 0.0) || !std::isfinite(mean_photons)) {
    throw std::invalid_argument("counting: mean photon number must be positive");
  }
  detector.validate();
  if (!(dwell_s > 0.0)) throw std::invalid_argument("counting: dwell time must be positive");
  if (repeats < 1) throw std::invalid_argument("counting: need at least one repeat");
  if (samples < 2) throw std::invalid_argument("counting: need at least two phase points");
}

std::vector<double> CountingScan::mode_trace(int mode) const {
  if (mode < 0 || mode >= mean_rate.cols()) throw std::invalid_argument("counting: mode outside the window");
  std::vector<double> out(static_cast<std::size_t>(mean_rate.rows()));
  for (Eigen::Index k = 0; k < mean_rate.rows(); ++k) out[static_cast<std::size_t>(k)] = mean_rate(k, mode);
  return out;
}

CountingScan photon_counting_scan(const VirtualApparatus& app, const CountingSettings& settings) {
  settings.validate();
  const ModeLattice& lat = app.lattice();
  const int d = lat.dim();
  const int samples = settings.samples;
  const Detector& det = settings.detector;
  if (samples < 2 * d) {
    throw std::invalid_argument("counting: " + std::to_string(samples) + " phase points cannot resolve " +
                                std::to_string(d - 1) + " harmonics");
  }

  CountingScan scan;
  scan.dwell_s = settings.dwell_s;
  scan.expected_rate.resize(samples, d);
  for (int k = 0; k < samples; ++k) {
    const double phi = 2.0 * std::numbers::pi * k / samples;
    scan.phi.push_back(phi);
    // Unit input power, so |out_m|^2 is eta * q_m.
    const Eigen::VectorXcd out = app.output_field(ProbeState::superposition(d, phi));
    for (int m = 0; m < d; ++m) {
      const double lambda = settings.mean_photons * std::norm(out[lat.window_offset() + m]) * det.efficiency;
      scan.expected_rate(k, m) = det.gate_rate_hz * -std::expm1(-lambda) + det.dark_rate_hz;
    }
  }

  // One stream per (repeat, phase point); the last slot of each repeat is the laser-off dwell.
  const auto stride = static_cast<std::uint64_t>(samples) + 1;
  for (int r = 0; r < settings.repeats; ++r) {
    Eigen::MatrixXd counts(samples, d);
    for (int k = 0; k < samples; ++k) {
      auto rng = derived_stream(settings.seed, stream_domain::photon_counting, r * stride + k);
      for (int m = 0; m < d; ++m) {
        std::poisson_distribution<long long> poisson(scan.expected_rate(k, m) * settings.dwell_s);
        counts(k, m) = static_cast<double>(poisson(rng));
      }
    }
    scan.raw_counts.push_back(std::move(counts));
    auto rng = derived_stream(settings.seed, stream_domain::photon_counting, r * stride + samples);
    double dark = 0.0;
    if (det.dark_rate_hz > 0.0) {
      std::poisson_distribution<long long> poisson(det.dark_rate_hz * settings.dwell_s);
      dark = static_cast<double>(poisson(rng));
    }
    scan.dark_counts.push_back(dark);
  }

  double dark_mean = 0.0;
  for (double c : scan.dark_counts) dark_mean += c;
  scan.dark_rate_subtracted = dark_mean / settings.repeats / settings.dwell_s;

  scan.mean_rate = Eigen::MatrixXd::Zero(samples, d);
  scan.std_rate = Eigen::MatrixXd::Zero(samples, d);
  for (const auto& c : scan.raw_counts) scan.mean_rate += c / settings.dwell_s;
  scan.mean_rate /= settings.repeats;
  if (settings.repeats > 1) {
    for (const auto& c : scan.raw_counts) {
      scan.std_rate += (c / settings.dwell_s - scan.mean_rate).cwiseAbs2();
    }
    scan.std_rate = (scan.std_rate / (settings.repeats - 1)).cwiseSqrt();
  }
  scan.mean_rate.array() -= scan.dark_rate_subtracted;
  return scan;
}

double visibility(std::span<const double> trace, int harmonics) {
  const int k = static_cast<int>(trace.size());
  if (harmonics < 1) throw std::invalid_argument("visibility: need at least the constant term");
  if (k < 2 * harmonics) {
    throw std::invalid_argument("visibility: " + std::to_string(k) + " samples cannot resolve " +
                                std::to_string(harmonics) + " harmonics");
  }
  if (std::all_of(trace.begin(), trace.end(), [](double y) { return y == 0.0; })) {
    throw DegenerateInput("visibility: trace is identically zero");
  }
  std::vector<std::complex<double>> c(static_cast<std::size_t>(harmonics));
  for (int n = 0; n < harmonics; ++n) {
    std::complex<double> acc = 0.0;
    for (int i = 0; i < k; ++i) {
      acc += trace[static_cast<std::size_t>(i)] * std::polar(1.0, -2.0 * std::numbers::pi * n * i / k);
    }
    c[static_cast<std::size_t>(n)] = acc * ((n == 0 ? 1.0 : 2.0) / k);
  }
  constexpr int kGrid = 4096;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (int g = 0; g < kGrid; ++g) {
    const double phi = 2.0 * std::numbers::pi * g / kGrid;
    double y = c[0].real();
    for (int n = 1; n < harmonics; ++n) y += (c[static_cast<std::size_t>(n)] * std::polar(1.0, n * phi)).real();
    lo = std::min(lo, y);
    hi = std::max(hi, y);
  }
  if (!(hi > 0.0)) throw DegenerateInput("visibility: fitted trace is never positive");
  if (hi + lo <= 0.0) return 1.0;
  return std::clamp((hi - lo) / (hi + lo), 0.0, 1.0);
}

}  // namespace freqgate::lab
