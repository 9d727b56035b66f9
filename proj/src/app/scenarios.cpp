#include "freqgate/app/scenarios.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

#include "freqgate/cascade.hpp"
#include "freqgate/design/io.hpp"
#include "freqgate/design/objective.hpp"
#include "freqgate/design/optimize.hpp"
#include "freqgate/design/studies.hpp"
#include "freqgate/lab/counting.hpp"
#include "freqgate/lab/io.hpp"
#include "freqgate/reference_data.hpp"

namespace freqgate::app {
namespace {

double r12(double x) { return round_significant(x, 12); }

std::string num(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", x);
  return buf;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double sd_of(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double m = mean_of(v);
  double s2 = 0.0;
  for (double x : v) s2 += (x - m) * (x - m);
  return std::sqrt(s2 / static_cast<double>(v.size() - 1));
}

design::DesignResult run_design(const ScenarioConfig& c, int threads) {
  return design::optimize(c.design, {threads});
}

RunOutput design_scenario(const ScenarioConfig& c, int threads) {
  const design::DesignResult r = run_design(c, threads);
  RunOutput out;
  out.files["design.json"] = dump(design::result_to_json(r));
  out.converged = r.converged;
  out.summary = {{"fidelity", r12(r.fidelity)},
                 {"success_probability", r12(r.success_probability)},
                 {"converged", r.converged}};
  return out;
}

RunOutput characterize_scenario(const ScenarioConfig& c, int threads) {
  RunOutput out;
  json design_doc;
  const TransferMatrix truth = apparatus_truth(c, threads, &design_doc, &out.converged);
  if (!design_doc.is_null()) out.files["design.json"] = dump(design_doc);

  const int d = c.design.target.dim();
  const Eigen::MatrixXcd block = truncate(truth);
  const double direct_f = fidelity(block, c.design.target);
  const double direct_p = success_probability(block);

  std::vector<double> fs, ps;
  json repeats = json::array();
  lab::ReconstructedMultiport first;
  for (int r = 0; r < c.apparatus.repeats; ++r) {
    const lab::VirtualApparatus app(truth, c.apparatus.insertion_loss, c.apparatus.osa_noise_sigma,
                                    c.apparatus.seed + static_cast<std::uint64_t>(r));
    const lab::ReconstructedMultiport rec = lab::reconstruct(app, c.design.target, c.apparatus.samples);
    if (r == 0) first = rec;
    fs.push_back(rec.fidelity);
    ps.push_back(rec.success_probability);
    repeats.push_back({{"seed", app.seed()}, {"fidelity", r12(rec.fidelity)}, {"success_probability", r12(rec.success_probability)}});
  }

  // Raw data of the first repeat: single-mode spectra, then every pair scan.
  const lab::VirtualApparatus app(truth, c.apparatus.insertion_loss, c.apparatus.osa_noise_sigma, c.apparatus.seed);
  std::vector<lab::Spectrum> spectra;
  for (int n = 0; n < d; ++n) {
    spectra.push_back(lab::measure_spectrum(app, lab::ProbeState::single_mode(d, n), static_cast<std::uint64_t>(n)));
  }
  out.files["spectra.csv"] = lab::spectra_csv(spectra);
  std::ostringstream fringes;
  fringes << "pair,phi,mode,power\n";
  for (int n = 1; n < d; ++n) {
    const lab::FringeTrace t =
        lab::phase_scan(app, n, c.apparatus.samples, static_cast<std::uint64_t>(d + (n - 1) * c.apparatus.samples));
    const std::string body = lab::fringe_csv(t, truth.lattice());
    std::istringstream lines(body);
    std::string line;
    std::getline(lines, line);
    while (std::getline(lines, line)) fringes << n << ',' << line.substr(0, line.rfind(',')) << '\n';
  }
  out.files["fringes.csv"] = fringes.str();

  json doc = {{"reconstruction", lab::reconstruction_to_json(first)},
              {"repeats", repeats},
              {"fidelity", {{"mean", r12(mean_of(fs))}, {"sd", r12(sd_of(fs))}}},
              {"success_probability", {{"mean", r12(mean_of(ps))}, {"sd", r12(sd_of(ps))}}},
              {"direct", {{"fidelity", r12(direct_f)}, {"success_probability", r12(direct_p)}}},
              {"truth", c.apparatus.truth}};
  out.files["characterization.json"] = dump(doc);
  out.summary = {{"fidelity", r12(mean_of(fs))},
                 {"fidelity_sd", r12(sd_of(fs))},
                 {"success_probability", r12(mean_of(ps))},
                 {"success_probability_sd", r12(sd_of(ps))}};
  return out;
}

RunOutput guardband_scenario(const ScenarioConfig& c, int threads) {
  const design::DesignResult r = run_design(c, threads);
  RunOutput out;
  out.converged = r.converged;
  out.files["design.json"] = dump(design::result_to_json(r));
  const double isolated = r.fidelity;
  std::ostringstream csv;
  csv << "separation,fidelity,success_probability,deficit\n";
  json rows = json::array();
  std::vector<bool> within;
  for (int s : c.guardband.separations) {
    const design::Metrics m = design::parallel_gate_metrics(r, s);
    const double deficit = isolated - m.fidelity;
    within.push_back(deficit < c.guardband.tolerance);
    csv << s << ',' << num(m.fidelity) << ',' << num(m.success_probability) << ',' << num(deficit) << '\n';
    rows.push_back({{"separation", s},
                    {"fidelity", r12(m.fidelity)},
                    {"success_probability", r12(m.success_probability)},
                    {"deficit", r12(deficit)}});
  }
  // Smallest listed separation from which every larger one stays within tolerance.
  json asymptote = nullptr;
  for (std::size_t i = within.size(); i-- > 0 && within[i];) asymptote = c.guardband.separations[i];
  out.files["guardband.csv"] = csv.str();
  out.files["guardband.json"] =
      dump({{"isolated_fidelity", r12(isolated)}, {"tolerance", c.guardband.tolerance}, {"rows", rows}, {"asymptote", asymptote}});
  out.summary = {{"isolated_fidelity", r12(isolated)}, {"asymptote", asymptote}};
  return out;
}

RunOutput visibility_scenario(const ScenarioConfig& c, int threads) {
  RunOutput out;
  json design_doc;
  const TransferMatrix truth = apparatus_truth(c, threads, &design_doc, &out.converged);
  if (!design_doc.is_null()) out.files["design.json"] = dump(design_doc);
  const int d = c.design.target.dim();
  const lab::VirtualApparatus app(truth, c.apparatus.insertion_loss, c.apparatus.osa_noise_sigma, c.apparatus.seed);

  json runs = json::array();
  double worst = 1.0;
  for (int i = 0; i < c.counting.seeds; ++i) {
    lab::CountingSettings s = c.counting.settings;
    s.seed += static_cast<std::uint64_t>(i);
    const lab::CountingScan scan = lab::photon_counting_scan(app, s);
    if (i == 0) out.files["counting.csv"] = lab::counting_csv(scan);
    json vis = json::array();
    for (int m = 0; m < d; ++m) {
      const double v = lab::visibility(scan.mode_trace(m), d);
      worst = std::min(worst, v);
      vis.push_back(r12(v));
    }
    runs.push_back({{"seed", s.seed}, {"visibility", vis}, {"dark_rate_subtracted", r12(scan.dark_rate_subtracted)},
                    {"peak_rate", r12(scan.mean_rate.maxCoeff())}});
  }
  out.files["visibility.json"] = dump({{"runs", runs}, {"min_visibility", r12(worst)}, {"harmonics", d}});
  out.summary = {{"min_visibility", r12(worst)}};
  return out;
}

RunOutput scaling_scenario(const ScenarioConfig& c, int threads) {
  design::ScalingOptions o = c.scaling.options;
  o.threads = threads;
  const std::vector<design::ScalingRow> rows = design::scaling_study(c.scaling.max_dim, o);
  RunOutput out;
  json doc = json::array();
  double worst = 1.0;
  for (const auto& r : rows) {
    out.converged = out.converged && r.converged;
    worst = std::min(worst, r.product);
    doc.push_back({{"d", r.dim},
                   {"p", r.harmonics},
                   {"fidelity", r12(r.fidelity)},
                   {"success_probability", r12(r.success_probability)},
                   {"product", r12(r.product)},
                   {"converged", r.converged}});
  }
  out.files["scaling.csv"] = design::scaling_csv(rows);
  out.files["scaling.json"] = dump({{"rows", doc}, {"min_product", r12(worst)}});
  out.summary = {{"min_product", r12(worst)}};
  return out;
}

RunOutput bound_check_scenario(const ScenarioConfig& c, int threads) {
  RunOutput out;
  std::ostringstream csv;
  csv << "d,scatter_bound,ceiling,best_success_probability,balanced\n";
  json docs = json::array();
  double margin = 1.0;
  for (int d : c.bound_check.dims) {
    design::SingleEomProblem p = c.bound_check.search;
    p.dim = d;
    const design::SingleEomResult r = design::single_eom_search(p, threads);
    out.converged = out.converged && r.balanced;
    margin = std::min(margin, r.ceiling - r.success_probability);
    csv << d << ',' << num(r.scatter_bound) << ',' << num(r.ceiling) << ',' << num(r.success_probability) << ','
        << (r.balanced ? 1 : 0) << '\n';
    docs.push_back(design::single_eom_to_json(r));
  }
  out.files["bound_check.csv"] = csv.str();
  out.files["bound_check.json"] = dump({{"rows", docs}, {"min_margin_to_ceiling", r12(margin)}});
  out.summary = {{"min_margin_to_ceiling", r12(margin)}};
  return out;
}

// Independent of the FFT path: J_n(beta) = (1/pi) int_0^pi cos(n t - beta sin t) dt
// by the trapezoid rule on a fine grid, which is spectrally accurate for this
// periodic integrand.
double bessel_quadrature(int n, double beta) {
  constexpr int kPoints = 4096;
  double s = 0.0;
  for (int j = 0; j < kPoints; ++j) {
    const double t = 2.0 * std::numbers::pi * j / kPoints;
    s += std::cos(n * t - beta * std::sin(t));
  }
  return s / kPoints;
}

RunOutput bessel_check_scenario(const ScenarioConfig& c) {
  const auto& b = c.bessel_check;
  const int m = b.mode_count;
  const int center = m / 2;
  std::ostringstream csv;
  csv << "beta,n,toeplitz_re,toeplitz_im,bessel,quadrature,abs_error\n";
  double worst = 0.0;
  for (double beta : b.betas) {
    const TransferMatrix v = toeplitz_from_drive(FourierDrive::single_tone(beta, 0.0), m);
    for (int n = -b.max_order; n <= b.max_order; ++n) {
      const std::complex<double> entry = v.entries()(center + n, center);
      const double sign = (n < 0 && (-n) % 2 == 1) ? -1.0 : 1.0;
      const double exact = sign * std::cyl_bessel_j(static_cast<double>(std::abs(n)), beta);
      const double quad = bessel_quadrature(n, beta);
      const double err = std::max(std::abs(entry - exact), std::abs(entry - quad));
      worst = std::max(worst, err);
      csv << num(beta) << ',' << n << ',' << num(entry.real()) << ',' << num(entry.imag()) << ',' << num(exact) << ','
          << num(quad) << ',' << num(err) << '\n';
    }
  }
  RunOutput out;
  out.converged = worst <= b.tolerance;
  out.files["bessel_check.csv"] = csv.str();
  out.files["bessel_check.json"] = dump({{"tolerance", b.tolerance},
                                         {"max_abs_error", r12(worst)},
                                         {"passed", out.converged},
                                         {"max_order", b.max_order},
                                         {"mode_count", m}});
  out.summary = {{"max_abs_error", worst}, {"passed", out.converged}};
  return out;
}

}  // namespace

TransferMatrix apparatus_truth(const ScenarioConfig& c, int threads, json* design_json, bool* converged) {
  const std::string& t = c.apparatus.truth;
  const int m = c.design.lattice.mode_count();
  if (t == "design") {
    const design::DesignResult r = run_design(c, threads);
    if (design_json) *design_json = design::result_to_json(r);
    if (converged) *converged = r.converged;
    return design::build_cascade(r.parameters, c.design);
  }
  Eigen::MatrixXcd block;
  if (t == "target") block = c.design.target.matrix();
  else if (t == "measured_beamsplitter") block = reference::measured_beamsplitter();
  else if (t == "measured_tritter") block = reference::measured_tritter();
  else block = *c.apparatus.matrix;
  return TransferMatrix::embed_window_block(block, ModeLattice(m, static_cast<int>(block.rows())));
}

RunOutput run_scenario(const ScenarioConfig& c, int threads) {
  c.validate();
  switch (c.kind) {
    case ScenarioKind::design: return design_scenario(c, threads);
    case ScenarioKind::characterize: return characterize_scenario(c, threads);
    case ScenarioKind::guardband: return guardband_scenario(c, threads);
    case ScenarioKind::visibility: return visibility_scenario(c, threads);
    case ScenarioKind::scaling: return scaling_scenario(c, threads);
    case ScenarioKind::bound_check: return bound_check_scenario(c, threads);
    case ScenarioKind::bessel_check: return bessel_check_scenario(c);
  }
  throw ConfigError("unhandled scenario kind");
}

}  // namespace freqgate::app
