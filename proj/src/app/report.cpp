#include "freqgate/app/report.hpp"

#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "freqgate/app/bundle.hpp"
#include "freqgate/app/config.hpp"
#include "freqgate/design/io.hpp"
#include "freqgate/design/objective.hpp"
#include "freqgate/metrics.hpp"
#include "freqgate/reference_data.hpp"

namespace freqgate::app {
namespace {

namespace fs = std::filesystem;

std::string fmt(const char* pattern, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, pattern, x);
  return buf;
}

std::string published(const std::string& key) {
  const reference::Value* v = reference::find(key);
  if (!v) return "-";
  std::string s = fmt("%.6g", v->value);
  if (v->uncertainty > 0.0) s += "±" + fmt("%.2g", v->uncertainty);
  return s + "  [" + v->citation + "]";
}

void row(std::ostream& os, const std::string& label, const std::string& value, const std::string& ref) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "  %-34s %-22s ", label.c_str(), value.c_str());
  os << buf << ref << '\n';
}

json parse(const std::map<std::string, std::string>& files, const std::string& name) {
  try {
    return json::parse(files.at(name));
  } catch (const std::exception& e) {
    throw BundleError("cannot read " + name + ": " + e.what());
  }
}

std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream is(text);
  std::string line;
  std::getline(is, line);  // header
  while (std::getline(is, line)) {
    std::vector<std::string> cells;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    rows.push_back(std::move(cells));
  }
  return rows;
}

void write(const fs::path& dir, const std::string& name, const std::string& content, std::vector<std::string>& written) {
  std::ofstream os(dir / name, std::ios::binary);
  os << content;
  if (!os) throw std::runtime_error("cannot write " + (dir / name).string());
  written.push_back(name);
}

std::string gate_prefix(int dim) { return dim == 2 ? "bs" : dim == 3 ? "tr" : ""; }

// Output spectrum of every single-mode input, relative to the window.
std::string design_spectra(const design::DesignResult& r) {
  const TransferMatrix v = design::build_cascade(r.parameters, r.problem);
  const ModeLattice& lat = r.problem.lattice;
  std::ostringstream os;
  os << "input,mode,relative_mode,power\n";
  for (int n = 0; n < lat.dim(); ++n) {
    for (int m = 0; m < lat.mode_count(); ++m) {
      os << n << ',' << m << ',' << (m - lat.window_offset()) << ','
         << fmt("%.9g", std::norm(v.entries()(m, lat.window_offset() + n))) << '\n';
    }
  }
  return os.str();
}

void report_design(const std::map<std::string, std::string>& files, std::ostream& os, const fs::path& out,
                   std::vector<std::string>& written) {
  const design::DesignResult r = design::result_from_json(parse(files, "design.json"));
  const std::string pre = gate_prefix(r.problem.target.dim());
  row(os, "F (design)", fmt("%.6f", r.fidelity), pre.empty() ? "-" : published(pre + ".design.F"));
  row(os, "P (design)", fmt("%.6f", r.success_probability), pre.empty() ? "-" : published(pre + ".design.P"));
  row(os, "converged", r.converged ? "yes" : "no", "");
  if (r.problem.target.dim() == 2 && r.problem.harmonics == 1) {
    const double v_pi[] = {5.37};
    row(os, "RF power per EOM (dBm, V_pi 5.37)",
        fmt("%.2f", rf_power_dbm(r.parameters.first_drive(), v_pi)) + " / " +
            fmt("%.2f", rf_power_dbm(r.parameters.second_drive(), v_pi)),
        published("rf.bs.dbm"));
  }
  write(out, "spectra_by_input.csv", design_spectra(r), written);
}

void report_characterize(const std::map<std::string, std::string>& files, const ScenarioConfig& c, std::ostream& os,
                         const fs::path& out, std::vector<std::string>& written) {
  const json doc = parse(files, "characterization.json");
  const std::string pre = gate_prefix(c.design.target.dim());
  auto pm = [&](const char* key) {
    const json& q = doc.at(key);
    return fmt("%.5f", q.at("mean").get<double>()) + "±" + fmt("%.1g", q.at("sd").get<double>());
  };
  row(os, "F (reconstructed)", pm("fidelity"), pre.empty() ? "-" : published(pre + ".measured.F"));
  row(os, "P (reconstructed)", pm("success_probability"), pre.empty() ? "-" : published(pre + ".measured.P"));
  row(os, "F (direct truncation)", fmt("%.6f", doc.at("direct").at("fidelity").get<double>()), "");
  row(os, "P (direct truncation)", fmt("%.6f", doc.at("direct").at("success_probability").get<double>()), "");

  const int offset = c.design.lattice.window_offset();
  std::ostringstream spectra;
  spectra << "input,mode,relative_mode,power\n";
  for (const auto& cells : csv_rows(files.at("spectra.csv"))) {
    spectra << cells[2] << ',' << cells[0] << ',' << (std::stoi(cells[0]) - offset) << ',' << cells[1] << '\n';
  }
  write(out, "spectra_by_input.csv", spectra.str(), written);

  std::map<int, std::ostringstream> by_mode;
  for (const auto& cells : csv_rows(files.at("fringes.csv"))) {
    by_mode[std::stoi(cells[2])] << cells[2] << ',' << cells[0] << ',' << cells[1] << ',' << cells[3] << '\n';
  }
  std::string fringes = "mode,pair,phi,power\n";
  for (auto& [mode, s] : by_mode) fringes += s.str();
  write(out, "fringes_by_mode.csv", fringes, written);
}

void report_visibility(const std::map<std::string, std::string>& files, std::ostream& os, const fs::path& out,
                       std::vector<std::string>& written) {
  const json doc = parse(files, "visibility.json");
  row(os, "min visibility (all modes, seeds)", fmt("%.4f", doc.at("min_visibility").get<double>()),
      published("visibility.min"));
  const json& runs = doc.at("runs");
  if (!runs.empty()) {
    std::string per_mode;
    for (const auto& v : runs.at(0).at("visibility")) per_mode += (per_mode.empty() ? "" : " ") + fmt("%.4f", v.get<double>());
    row(os, "visibility per mode (first seed)", per_mode, "");
    row(os, "peak rate (counts/s, first seed)", fmt("%.0f", runs.at(0).at("peak_rate").get<double>()), "");
  }
  std::map<int, std::ostringstream> by_mode;
  for (const auto& cells : csv_rows(files.at("counting.csv"))) {
    if (cells[5] != "-1") continue;
    by_mode[std::stoi(cells[1])] << cells[1] << ',' << cells[0] << ',' << cells[2] << ',' << cells[3] << ','
                                 << cells[4] << '\n';
  }
  std::string fringes = "mode,phi,rate,std,expected\n";
  for (auto& [mode, s] : by_mode) fringes += s.str();
  write(out, "fringes_by_mode.csv", fringes, written);
}

void report_scaling(const std::map<std::string, std::string>& files, std::ostream& os) {
  const json doc = parse(files, "scaling.json");
  for (const auto& r : doc.at("rows")) {
    row(os, "F*P, d=" + std::to_string(r.at("d").get<int>()), fmt("%.6f", r.at("product").get<double>()),
        r.at("converged").get<bool>() ? "" : "(not converged)");
  }
  row(os, "min F*P", fmt("%.6f", doc.at("min_product").get<double>()), published("scaling.FxP"));
}

void report_guardband(const std::map<std::string, std::string>& files, std::ostream& os) {
  const json doc = parse(files, "guardband.json");
  row(os, "isolated F", fmt("%.8f", doc.at("isolated_fidelity").get<double>()), "");
  for (const auto& r : doc.at("rows")) {
    row(os, "F, separation " + std::to_string(r.at("separation").get<int>()), fmt("%.8f", r.at("fidelity").get<double>()), "");
  }
  const json& a = doc.at("asymptote");
  row(os, "separation within tolerance", a.is_null() ? "none" : std::to_string(a.get<int>()),
      published("guardband.modes"));
}

void report_bound(const std::map<std::string, std::string>& files, std::ostream& os) {
  const json doc = parse(files, "bound_check.json");
  for (const auto& r : doc.at("rows")) {
    const int d = r.at("dim").get<int>();
    row(os, "best single-EOM P, d=" + std::to_string(d),
        fmt("%.6f", r.at("success_probability").get<double>()) + " <= " + fmt("%.6f", r.at("ceiling").get<double>()),
        d == 2 ? published("single_eom.P") : "");
  }
}

void report_bessel(const std::map<std::string, std::string>& files, std::ostream& os) {
  const json doc = parse(files, "bessel_check.json");
  row(os, "max |Toeplitz - J_n|", fmt("%.3g", doc.at("max_abs_error").get<double>()),
      "tolerance " + fmt("%.0e", doc.at("tolerance").get<double>()));
  row(os, "verdict", doc.at("passed").get<bool>() ? "pass" : "FAIL", "");
}

}  // namespace

std::vector<std::string> report(const fs::path& bundle, const fs::path& out_dir, std::ostream& os) {
  const auto files = read_bundle(bundle, {"manifest.json", "config.json"});
  const json manifest = parse(files, "manifest.json");
  ScenarioConfig config;
  try {
    config = config_from_text(files.at("config.json"));
  } catch (const ConfigError& e) {
    throw BundleError(std::string("config.json: ") + e.what());
  }
  static const std::map<ScenarioKind, std::vector<std::string>> needed = {
      {ScenarioKind::design, {"design.json"}},
      {ScenarioKind::characterize, {"characterization.json", "spectra.csv", "fringes.csv"}},
      {ScenarioKind::guardband, {"guardband.json", "design.json"}},
      {ScenarioKind::visibility, {"visibility.json", "counting.csv"}},
      {ScenarioKind::scaling, {"scaling.json", "scaling.csv"}},
      {ScenarioKind::bound_check, {"bound_check.json", "bound_check.csv"}},
      {ScenarioKind::bessel_check, {"bessel_check.json", "bessel_check.csv"}}};
  std::string missing;
  for (const auto& f : needed.at(config.kind)) {
    if (!files.count(f)) missing += "\n  missing: " + f;
  }
  if (!missing.empty()) throw BundleError("incomplete bundle '" + bundle.string() + "':" + missing);

  const std::string recorded = manifest.value("config_hash", std::string());
  const std::string actual = hash_label(files.at("config.json"));
  os << "bundle   " << bundle.string() << '\n'
     << "scenario " << to_string(config.kind) << "   seed " << manifest.value("seed", std::uint64_t{0})
     << "   version " << manifest.value("version", std::string("?")) << '\n'
     << "config   " << actual << (recorded == actual ? "" : "   (MISMATCH: manifest says " + recorded + ")") << '\n';
  char header[160];
  std::snprintf(header, sizeof header, "  %-34s %-22s %s\n", "quantity", "simulated", "published reference");
  os << header;

  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw std::runtime_error("cannot create '" + out_dir.string() + "': " + ec.message());
  std::vector<std::string> written;
  switch (config.kind) {
    case ScenarioKind::design:
    case ScenarioKind::guardband:
      report_design(files, os, out_dir, written);
      if (config.kind == ScenarioKind::guardband) report_guardband(files, os);
      break;
    case ScenarioKind::characterize:
      report_characterize(files, config, os, out_dir, written);
      break;
    case ScenarioKind::visibility:
      report_visibility(files, os, out_dir, written);
      break;
    case ScenarioKind::scaling:
      report_scaling(files, os);
      break;
    case ScenarioKind::bound_check:
      report_bound(files, os);
      break;
    case ScenarioKind::bessel_check:
      report_bessel(files, os);
      break;
  }
  for (const auto& [name, content] : files) {
    if (name.size() > 4 && name.ends_with(".csv")) write(out_dir, name, content, written);
  }
  os << "wrote    ";
  for (const auto& w : written) os << w << ' ';
  os << "-> " << out_dir.string() << '\n';
  return written;
}

}  // namespace freqgate::app
