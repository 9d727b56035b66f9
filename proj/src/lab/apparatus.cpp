#include "freqgate/lab/apparatus.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>

#include "freqgate/errors.hpp"
#include "freqgate/rng.hpp"

namespace freqgate::lab {

ProbeState::ProbeState(Eigen::VectorXcd amplitudes) : amplitudes_(std::move(amplitudes)) {
  if (amplitudes_.size() == 0 || amplitudes_.squaredNorm() == 0.0) {
    throw std::invalid_argument("probe: at least one mode must carry power");
  }
}

ProbeState ProbeState::single_mode(int dim, int mode, double power) {
  if (mode < 0 || mode >= dim) throw std::invalid_argument("probe: mode outside the window");
  Eigen::VectorXcd x = Eigen::VectorXcd::Zero(dim);
  x[mode] = std::sqrt(power);
  return ProbeState(std::move(x));
}

ProbeState ProbeState::pair(int dim, int n, double phi, double power) {
  if (n < 1 || n >= dim) {
    throw std::invalid_argument("probe: pair partner " + std::to_string(n) + " must lie in [1, " +
                                std::to_string(dim - 1) + "]");
  }
  Eigen::VectorXcd x = Eigen::VectorXcd::Zero(dim);
  x[0] = std::sqrt(power);
  x[n] = std::polar(std::sqrt(power), phi);
  return ProbeState(std::move(x));
}

ProbeState ProbeState::superposition(int dim, double phi, double power) {
  if (dim < 1) throw std::invalid_argument("probe: dimension must be >= 1");
  Eigen::VectorXcd x(dim);
  for (int n = 0; n < dim; ++n) x[n] = std::polar(std::sqrt(power / dim), -n * phi);
  return ProbeState(std::move(x));
}

double Spectrum::total() const {
  double s = 0.0;
  for (double p : powers) s += p;
  return s;
}

VirtualApparatus::VirtualApparatus(TransferMatrix truth, double insertion_loss, double osa_noise_sigma,
                                   std::uint64_t seed)
    : truth_(std::move(truth)), eta_(insertion_loss), sigma_(osa_noise_sigma), seed_(seed) {
  if (!(eta_ > 0.0 && eta_ <= 1.0)) throw std::invalid_argument("apparatus: transmissivity must lie in (0, 1]");
  if (!(sigma_ >= 0.0 && sigma_ < 0.1)) throw std::invalid_argument("apparatus: OSA noise sigma must lie in [0, 0.1)");
}

Eigen::VectorXcd VirtualApparatus::output_field(const ProbeState& probe) const {
  const ModeLattice& lat = lattice();
  if (probe.dim() > lat.dim()) {
    throw std::invalid_argument("apparatus: probe has " + std::to_string(probe.dim()) +
                                " modes but the window holds " + std::to_string(lat.dim()));
  }
  const auto& v = truth_.entries();
  return std::sqrt(eta_) * (v.middleCols(lat.window_offset(), probe.dim()) * probe.amplitudes());
}

Spectrum measure_spectrum(const VirtualApparatus& app, const ProbeState& probe, std::uint64_t acquisition) {
  const Eigen::VectorXcd out = app.output_field(probe);
  Spectrum s;
  s.acquisition = acquisition;
  s.powers.resize(static_cast<std::size_t>(out.size()));
  const double sigma = app.osa_noise_sigma();
  if (sigma == 0.0) {
    for (Eigen::Index m = 0; m < out.size(); ++m) s.powers[static_cast<std::size_t>(m)] = std::norm(out[m]);
    return s;
  }
  auto rng = derived_stream(app.seed(), stream_domain::osa, acquisition);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (Eigen::Index m = 0; m < out.size(); ++m) {
    double z = normal(rng);
    while (std::abs(z) > 5.0) z = normal(rng);
    s.powers[static_cast<std::size_t>(m)] = std::norm(out[m]) * (1.0 + sigma * z);
  }
  return s;
}

Eigen::MatrixXd reconstruct_amplitudes(std::span<const Spectrum> spectra, const ModeLattice& lattice) {
  const int d = static_cast<int>(spectra.size());
  if (d < 1 || d > lattice.dim()) throw std::invalid_argument("amplitudes: need one spectrum per input mode");
  Eigen::MatrixXd r(d, d);
  for (int n = 0; n < d; ++n) {
    const Spectrum& s = spectra[static_cast<std::size_t>(n)];
    if (static_cast<int>(s.powers.size()) != lattice.mode_count()) {
      throw std::invalid_argument("amplitudes: spectrum does not cover the lattice");
    }
    const double total = s.total();
    if (!(total > 0.0)) throw DegenerateInput("amplitudes: no power detected under probe " + std::to_string(n));
    for (int m = 0; m < d; ++m) {
      const double p = s.powers[static_cast<std::size_t>(lattice.window_offset() + m)];
      r(m, n) = std::sqrt(std::max(0.0, p) / total);
    }
  }
  return r;
}

namespace {

FringeTrace scan_pair(const VirtualApparatus& app, int d, int n, int samples, std::uint64_t first_acquisition,
                      double power) {
  if (n < 1 || n >= d) throw std::invalid_argument("phase scan: pair (0, " + std::to_string(n) + ") outside the window");
  if (samples < 2 * (d - 1) + 2) {
    throw std::invalid_argument("phase scan: " + std::to_string(samples) + " samples cannot resolve " +
                                std::to_string(d - 1) + " harmonics");
  }
  FringeTrace t;
  t.pair = n;
  t.values.resize(samples, app.lattice().mode_count());
  for (int k = 0; k < samples; ++k) {
    const double phi = 2.0 * std::numbers::pi * k / samples;
    t.phi.push_back(phi);
    const Spectrum s = measure_spectrum(app, ProbeState::pair(d, n, phi, power),
                                        first_acquisition + static_cast<std::uint64_t>(k));
    for (std::size_t m = 0; m < s.powers.size(); ++m) t.values(k, static_cast<Eigen::Index>(m)) = s.powers[m];
  }
  return t;
}

}  // namespace

FringeTrace phase_scan(const VirtualApparatus& app, int n, int samples, std::uint64_t first_acquisition,
                       double power) {
  return scan_pair(app, app.lattice().dim(), n, samples, first_acquisition, power);
}

FringeFit fit_fringe(std::span<const double> samples, int harmonic) {
  const int k = static_cast<int>(samples.size());
  if (harmonic < 1) throw std::invalid_argument("fringe fit: harmonic must be >= 1");
  if (2 * harmonic >= k) {
    throw std::invalid_argument("fringe fit: harmonic " + std::to_string(harmonic) + " aliases with " +
                                std::to_string(k) + " samples");
  }
  double mean = 0.0;
  std::complex<double> c = 0.0;
  for (int i = 0; i < k; ++i) {
    const double y = samples[static_cast<std::size_t>(i)];
    mean += y;
    c += y * std::polar(1.0, -2.0 * std::numbers::pi * harmonic * i / k);
  }
  mean /= k;
  c *= 2.0 / k;
  FringeFit f{mean, std::abs(c), std::arg(c)};
  if (f.amplitude < 1e-12 * std::abs(mean)) f.phase = 0.0;
  return f;
}

ReconstructedMultiport reconstruct(const VirtualApparatus& app, const GateTarget& target, int samples) {
  const int d = target.dim();
  const ModeLattice& lat = app.lattice();
  if (d > lat.dim()) throw std::invalid_argument("reconstruct: target is larger than the apparatus window");

  std::vector<Spectrum> spectra;
  for (int n = 0; n < d; ++n) {
    spectra.push_back(measure_spectrum(app, ProbeState::single_mode(d, n), static_cast<std::uint64_t>(n)));
  }
  ReconstructedMultiport out;
  out.moduli = reconstruct_amplitudes(spectra, lat);
  out.phases = Eigen::MatrixXd::Zero(d, d);
  for (int n = 1; n < d; ++n) {
    const auto first = static_cast<std::uint64_t>(d + (n - 1) * samples);
    const FringeTrace trace = scan_pair(app, d, n, samples, first, 1.0);
    std::vector<double> b(static_cast<std::size_t>(d));
    for (int m = 0; m < d; ++m) {
      const Eigen::VectorXd col = trace.values.col(lat.window_offset() + m);
      b[static_cast<std::size_t>(m)] = fit_fringe(std::span<const double>(col.data(), static_cast<std::size_t>(col.size())), 1).phase;
    }
    for (int m = 1; m < d; ++m) out.phases(m, n) = wrap_phase(b[static_cast<std::size_t>(m)] - b[0]);
  }
  out.entries.resize(d, d);
  for (int m = 0; m < d; ++m) {
    for (int n = 0; n < d; ++n) out.entries(m, n) = std::polar(out.moduli(m, n), out.phases(m, n));
  }
  out.fidelity = fidelity(out.entries, target);
  out.success_probability = success_probability(out.entries);
  return out;
}

Eigen::MatrixXcd gauge_fixed(const Eigen::MatrixXcd& v) {
  Eigen::MatrixXcd g(v.rows(), v.cols());
  const double a00 = std::arg(v(0, 0));
  for (Eigen::Index m = 0; m < v.rows(); ++m) {
    for (Eigen::Index n = 0; n < v.cols(); ++n) {
      const double phase = (m == 0 || n == 0)
                               ? 0.0
                               : wrap_phase(std::arg(v(m, n)) - std::arg(v(m, 0)) - std::arg(v(0, n)) + a00);
      g(m, n) = std::polar(std::abs(v(m, n)), phase);
    }
  }
  return g;
}

}  // namespace freqgate::lab
