#include "freqgate/lab/io.hpp"

#include <cstdio>
#include <sstream>

namespace freqgate::lab {
namespace {

std::string num(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", x);
  return buf;
}

}  // namespace

std::string spectra_csv(std::span<const Spectrum> spectra) {
  std::ostringstream os;
  os << "mode,power,repeat\n";
  for (std::size_t r = 0; r < spectra.size(); ++r) {
    const auto& p = spectra[r].powers;
    for (std::size_t m = 0; m < p.size(); ++m) os << m << ',' << num(p[m]) << ',' << r << '\n';
  }
  return os.str();
}

std::string fringe_csv(const FringeTrace& trace, const ModeLattice& lattice, int repeat) {
  std::ostringstream os;
  os << "phi,mode,power,repeat\n";
  for (std::size_t k = 0; k < trace.phi.size(); ++k) {
    for (int m = 0; m < lattice.dim(); ++m) {
      os << num(trace.phi[k]) << ',' << m << ','
         << num(trace.values(static_cast<Eigen::Index>(k), lattice.window_offset() + m)) << ',' << repeat << '\n';
    }
  }
  return os.str();
}

std::string counting_csv(const CountingScan& scan) {
  std::ostringstream os;
  os << "phi,mode,rate,std,expected,repeat\n";
  const auto d = scan.mean_rate.cols();
  for (std::size_t k = 0; k < scan.phi.size(); ++k) {
    const auto kk = static_cast<Eigen::Index>(k);
    for (Eigen::Index m = 0; m < d; ++m) {
      os << num(scan.phi[k]) << ',' << m << ',' << num(scan.mean_rate(kk, m)) << ',' << num(scan.std_rate(kk, m))
         << ',' << num(scan.expected_rate(kk, m)) << ",-1\n";
    }
  }
  for (std::size_t r = 0; r < scan.raw_counts.size(); ++r) {
    const auto& c = scan.raw_counts[r];
    for (std::size_t k = 0; k < scan.phi.size(); ++k) {
      const auto kk = static_cast<Eigen::Index>(k);
      for (Eigen::Index m = 0; m < d; ++m) {
        os << num(scan.phi[k]) << ',' << m << ',' << num(c(kk, m) / scan.dwell_s) << ",," << num(scan.expected_rate(kk, m)) << ','
           << r << '\n';
      }
    }
  }
  return os.str();
}

json reconstruction_to_json(const ReconstructedMultiport& r) {
  return {{"gauge", "row0_col0_real"},
          {"dim", r.entries.rows()},
          {"entries", matrix_to_json(r.entries)},
          {"fidelity", round_significant(r.fidelity, 12)},
          {"success_probability", round_significant(r.success_probability, 12)}};
}

}  // namespace freqgate::lab
