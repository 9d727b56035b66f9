#include "freqgate/app/config.hpp"

#include <algorithm>
#include <cmath>
#include <initializer_list>

#include "freqgate/design/io.hpp"
#include "freqgate/metrics.hpp"

namespace freqgate::app {
namespace {

void check_keys(const json& j, std::initializer_list<const char*> allowed, const std::string& section) {
  if (!j.is_object()) throw ConfigError(section + ": expected an object");
  for (const auto& [key, value] : j.items()) {
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; })) {
      throw ConfigError(section + ": unknown key '" + key + "'");
    }
  }
}

template <class T>
void read(const json& j, const char* key, T& out, const std::string& section) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(section + "." + key + ": wrong type");
  }
}

json detector_to_json(const lab::Detector& d) {
  return {{"efficiency", d.efficiency},
          {"gate_rate_hz", d.gate_rate_hz},
          {"gate_duration_s", d.gate_duration_s},
          {"dark_rate_hz", d.dark_rate_hz}};
}

lab::Detector detector_from_json(const json& j) {
  check_keys(j, {"efficiency", "gate_rate_hz", "gate_duration_s", "dark_rate_hz"}, "counting.detector");
  lab::Detector d;
  read(j, "efficiency", d.efficiency, "counting.detector");
  read(j, "gate_rate_hz", d.gate_rate_hz, "counting.detector");
  read(j, "gate_duration_s", d.gate_duration_s, "counting.detector");
  read(j, "dark_rate_hz", d.dark_rate_hz, "counting.detector");
  return d;
}

// Full precision, unlike the 12-digit result documents: configs must round-trip.
json exact_matrix(const Eigen::MatrixXcd& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back({m(r, c).real(), m(r, c).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

void check_design_keys(const json& j) {
  check_keys(j,
             {"target", "lattice", "harmonics", "fidelity_floor", "shaper_window", "restarts", "iteration_budget",
              "master_seed", "goal", "start", "start_amplitude_max", "screen_iterations", "polish_count"},
             "design");
}

int truth_dim(const ScenarioConfig& c) {
  const std::string& t = c.apparatus.truth;
  if (t == "measured_beamsplitter") return 2;
  if (t == "measured_tritter") return 3;
  if (t == "matrix") return c.apparatus.matrix ? static_cast<int>(c.apparatus.matrix->rows()) : 0;
  return c.design.target.dim();
}

}  // namespace

std::string to_string(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::design: return "design";
    case ScenarioKind::characterize: return "characterize";
    case ScenarioKind::guardband: return "guardband-sweep";
    case ScenarioKind::visibility: return "visibility";
    case ScenarioKind::scaling: return "scaling";
    case ScenarioKind::bound_check: return "bound-check";
    case ScenarioKind::bessel_check: return "bessel-check";
  }
  return "design";
}

std::string command_name(ScenarioKind kind) {
  return kind == ScenarioKind::guardband ? "guardband" : to_string(kind);
}

ScenarioKind scenario_from_string(const std::string& name) {
  for (auto k : {ScenarioKind::design, ScenarioKind::characterize, ScenarioKind::guardband, ScenarioKind::visibility,
                 ScenarioKind::scaling, ScenarioKind::bound_check, ScenarioKind::bessel_check}) {
    if (name == to_string(k) || name == command_name(k)) return k;
  }
  throw ConfigError("unknown scenario kind '" + name +
                    "' (expected design, characterize, guardband-sweep, visibility, scaling, bound-check or "
                    "bessel-check)");
}

ScenarioConfig ScenarioConfig::defaults(ScenarioKind kind) {
  ScenarioConfig c;
  c.kind = kind;
  if (kind == ScenarioKind::visibility) {
    c.apparatus.insertion_loss = 0.0562;
    c.counting.settings.samples = 20;
  }
  return c;
}

void ScenarioConfig::validate() const {
  try {
    design.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("design: ") + e.what());
  }
  const auto& a = apparatus;
  static const char* truths[] = {"design", "target", "measured_beamsplitter", "measured_tritter", "matrix"};
  if (std::find(std::begin(truths), std::end(truths), a.truth) == std::end(truths)) {
    throw ConfigError("apparatus.truth: unknown source '" + a.truth + "'");
  }
  if (a.truth == "matrix") {
    if (!a.matrix) throw ConfigError("apparatus.matrix: required when truth is 'matrix'");
    if (a.matrix->rows() != a.matrix->cols() || a.matrix->rows() < 2) {
      throw ConfigError("apparatus.matrix: must be square with d >= 2");
    }
    for (Eigen::Index c = 0; c < a.matrix->cols(); ++c) {
      if (a.matrix->col(c).squaredNorm() > 1.0 + 1e-12) throw ConfigError("apparatus.matrix: column norm exceeds 1");
    }
  }
  if (kind == ScenarioKind::characterize || kind == ScenarioKind::visibility) {
    if (truth_dim(*this) != design.target.dim()) {
      throw ConfigError("apparatus.truth: " + std::to_string(truth_dim(*this)) + "-mode truth does not match the " +
                        std::to_string(design.target.dim()) + "-mode target");
    }
    if (2 * truth_dim(*this) > design.lattice.mode_count()) {
      throw ConfigError("apparatus: lattice too small for the truth");
    }
  }
  if (!(a.insertion_loss > 0.0 && a.insertion_loss <= 1.0)) throw ConfigError("apparatus.insertion_loss: must lie in (0, 1]");
  if (!(a.osa_noise_sigma >= 0.0 && a.osa_noise_sigma < 0.1)) {
    throw ConfigError("apparatus.osa_noise_sigma: must lie in [0, 0.1)");
  }
  if (a.samples < 2 * design.target.dim()) throw ConfigError("apparatus.samples: need at least 2d phase points");
  if (a.repeats < 1) throw ConfigError("apparatus.repeats: must be >= 1");
  try {
    counting.settings.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("counting: ") + e.what());
  }
  if (counting.seeds < 1) throw ConfigError("counting.seeds: must be >= 1");
  if (kind == ScenarioKind::visibility && counting.settings.samples < 2 * design.target.dim()) {
    throw ConfigError("counting.samples: need at least 2d phase points");
  }
  if (guardband.separations.empty()) throw ConfigError("guardband.separations: empty");
  for (int s : guardband.separations) {
    if (s < 0 || 2 * design.target.dim() + s > design.lattice.mode_count()) {
      throw ConfigError("guardband.separations: " + std::to_string(s) + " does not fit on the lattice");
    }
  }
  if (!(guardband.tolerance > 0.0)) throw ConfigError("guardband.tolerance: must be positive");
  if (scaling.max_dim < 2 || scaling.max_dim > 7) throw ConfigError("scaling.max_dim: must lie in [2, 7]");
  const auto& so = scaling.options;
  if (so.restarts < 1 || so.iteration_budget < 1 || so.screen_iterations < 0 || so.polish_count < 0 ||
      so.shaper_window < 1 || so.mode_count < 4 * scaling.max_dim) {
    throw ConfigError("scaling: invalid optimizer settings");
  }
  if (!(so.fidelity_floor > 0.0 && so.fidelity_floor < 1.0)) throw ConfigError("scaling.fidelity_floor: must lie in (0, 1)");
  if (bound_check.dims.empty()) throw ConfigError("bound_check.dims: empty");
  for (int d : bound_check.dims) {
    design::SingleEomProblem p = bound_check.search;
    p.dim = d;
    try {
      p.validate();
    } catch (const std::invalid_argument& e) {
      throw ConfigError("bound_check (d=" + std::to_string(d) + "): " + e.what());
    }
  }
  if (bessel_check.betas.empty()) throw ConfigError("bessel_check.betas: empty");
  for (double b : bessel_check.betas) {
    if (!std::isfinite(b) || b < 0.0) throw ConfigError("bessel_check.betas: must be finite and >= 0");
  }
  if (bessel_check.max_order < 0 || bessel_check.mode_count < 4 || bessel_check.mode_count % 2 != 0 ||
      2 * bessel_check.max_order >= bessel_check.mode_count) {
    throw ConfigError("bessel_check: max_order must stay below half of an even mode_count");
  }
  if (!(bessel_check.tolerance > 0.0)) throw ConfigError("bessel_check.tolerance: must be positive");
  if (output && output->empty()) throw ConfigError("output: empty path");
}

void ScenarioConfig::apply_seed(std::uint64_t seed) {
  design.master_seed = seed;
  apparatus.seed = seed;
  counting.settings.seed = seed;
  scaling.options.master_seed = seed;
  bound_check.search.master_seed = seed;
}

std::uint64_t ScenarioConfig::primary_seed() const {
  switch (kind) {
    case ScenarioKind::visibility: return counting.settings.seed;
    case ScenarioKind::scaling: return scaling.options.master_seed;
    case ScenarioKind::bound_check: return bound_check.search.master_seed;
    case ScenarioKind::characterize:
      return apparatus.truth == "design" ? design.master_seed : apparatus.seed;
    default: return design.master_seed;
  }
}

json config_to_json(const ScenarioConfig& c) {
  json apparatus = {{"truth", c.apparatus.truth},
                    {"insertion_loss", c.apparatus.insertion_loss},
                    {"osa_noise_sigma", c.apparatus.osa_noise_sigma},
                    {"seed", c.apparatus.seed},
                    {"samples", c.apparatus.samples},
                    {"repeats", c.apparatus.repeats}};
  if (c.apparatus.matrix) apparatus["matrix"] = exact_matrix(*c.apparatus.matrix);
  json design = design::problem_to_json(c.design);
  // The target's own serializer rounds custom matrices; keep them exact here.
  if (design["target"]["kind"] == "matrix") design["target"]["matrix"] = exact_matrix(c.design.target.matrix());
  const auto& cs = c.counting.settings;
  const auto& so = c.scaling.options;
  const auto& se = c.bound_check.search;
  json j = {{"scenario", to_string(c.kind)},
            {"design", design},
            {"apparatus", apparatus},
            {"counting",
             {{"mean_photons", cs.mean_photons},
              {"detector", detector_to_json(cs.detector)},
              {"dwell_s", cs.dwell_s},
              {"repeats", cs.repeats},
              {"samples", cs.samples},
              {"seed", cs.seed},
              {"seeds", c.counting.seeds}}},
            {"guardband", {{"separations", c.guardband.separations}, {"tolerance", c.guardband.tolerance}}},
            {"scaling",
             {{"max_dim", c.scaling.max_dim},
              {"mode_count", so.mode_count},
              {"shaper_window", so.shaper_window},
              {"fidelity_floor", so.fidelity_floor},
              {"restarts", so.restarts},
              {"screen_iterations", so.screen_iterations},
              {"polish_count", so.polish_count},
              {"iteration_budget", so.iteration_budget},
              {"master_seed", so.master_seed}}},
            {"bound_check",
             {{"dims", c.bound_check.dims},
              {"mode_count", se.mode_count},
              {"harmonics", se.harmonics},
              {"restarts", se.restarts},
              {"iteration_budget", se.iteration_budget},
              {"start_amplitude_max", se.start_amplitude_max},
              {"balance_tolerance", se.balance_tolerance},
              {"master_seed", se.master_seed}}},
            {"bessel_check",
             {{"betas", c.bessel_check.betas},
              {"max_order", c.bessel_check.max_order},
              {"mode_count", c.bessel_check.mode_count},
              {"tolerance", c.bessel_check.tolerance}}}};
  if (c.output) j["output"] = *c.output;
  return j;
}

ScenarioConfig config_from_json(const json& j) {
  check_keys(j,
             {"scenario", "design", "apparatus", "counting", "guardband", "scaling", "bound_check", "bessel_check",
              "output"},
             "config");
  if (!j.contains("scenario")) throw ConfigError("config: missing 'scenario'");
  std::string kind_name;
  read(j, "scenario", kind_name, "config");
  ScenarioConfig c = ScenarioConfig::defaults(scenario_from_string(kind_name));

  if (j.contains("design")) {
    check_design_keys(j.at("design"));
    try {
      c.design = design::problem_from_json(j.at("design"));
    } catch (const json::exception& e) {
      throw ConfigError(std::string("design: ") + e.what());
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("design: ") + e.what());
    }
  }
  if (j.contains("apparatus")) {
    const json& a = j.at("apparatus");
    check_keys(a, {"truth", "matrix", "insertion_loss", "osa_noise_sigma", "seed", "samples", "repeats"}, "apparatus");
    read(a, "truth", c.apparatus.truth, "apparatus");
    if (a.contains("matrix")) {
      try {
        c.apparatus.matrix = matrix_from_json(a.at("matrix"));
      } catch (const std::exception& e) {
        throw ConfigError(std::string("apparatus.matrix: ") + e.what());
      }
    }
    read(a, "insertion_loss", c.apparatus.insertion_loss, "apparatus");
    read(a, "osa_noise_sigma", c.apparatus.osa_noise_sigma, "apparatus");
    read(a, "seed", c.apparatus.seed, "apparatus");
    read(a, "samples", c.apparatus.samples, "apparatus");
    read(a, "repeats", c.apparatus.repeats, "apparatus");
  }
  if (j.contains("counting")) {
    const json& k = j.at("counting");
    check_keys(k, {"mean_photons", "detector", "dwell_s", "repeats", "samples", "seed", "seeds"}, "counting");
    auto& s = c.counting.settings;
    read(k, "mean_photons", s.mean_photons, "counting");
    if (k.contains("detector")) s.detector = detector_from_json(k.at("detector"));
    read(k, "dwell_s", s.dwell_s, "counting");
    read(k, "repeats", s.repeats, "counting");
    read(k, "samples", s.samples, "counting");
    read(k, "seed", s.seed, "counting");
    read(k, "seeds", c.counting.seeds, "counting");
  }
  if (j.contains("guardband")) {
    const json& g = j.at("guardband");
    check_keys(g, {"separations", "tolerance"}, "guardband");
    read(g, "separations", c.guardband.separations, "guardband");
    read(g, "tolerance", c.guardband.tolerance, "guardband");
  }
  if (j.contains("scaling")) {
    const json& s = j.at("scaling");
    check_keys(s,
               {"max_dim", "mode_count", "shaper_window", "fidelity_floor", "restarts", "screen_iterations",
                "polish_count", "iteration_budget", "master_seed"},
               "scaling");
    auto& o = c.scaling.options;
    read(s, "max_dim", c.scaling.max_dim, "scaling");
    read(s, "mode_count", o.mode_count, "scaling");
    read(s, "shaper_window", o.shaper_window, "scaling");
    read(s, "fidelity_floor", o.fidelity_floor, "scaling");
    read(s, "restarts", o.restarts, "scaling");
    read(s, "screen_iterations", o.screen_iterations, "scaling");
    read(s, "polish_count", o.polish_count, "scaling");
    read(s, "iteration_budget", o.iteration_budget, "scaling");
    read(s, "master_seed", o.master_seed, "scaling");
  }
  if (j.contains("bound_check")) {
    const json& b = j.at("bound_check");
    check_keys(b,
               {"dims", "mode_count", "harmonics", "restarts", "iteration_budget", "start_amplitude_max",
                "balance_tolerance", "master_seed"},
               "bound_check");
    auto& p = c.bound_check.search;
    read(b, "dims", c.bound_check.dims, "bound_check");
    read(b, "mode_count", p.mode_count, "bound_check");
    read(b, "harmonics", p.harmonics, "bound_check");
    read(b, "restarts", p.restarts, "bound_check");
    read(b, "iteration_budget", p.iteration_budget, "bound_check");
    read(b, "start_amplitude_max", p.start_amplitude_max, "bound_check");
    read(b, "balance_tolerance", p.balance_tolerance, "bound_check");
    read(b, "master_seed", p.master_seed, "bound_check");
  }
  if (j.contains("bessel_check")) {
    const json& b = j.at("bessel_check");
    check_keys(b, {"betas", "max_order", "mode_count", "tolerance"}, "bessel_check");
    read(b, "betas", c.bessel_check.betas, "bessel_check");
    read(b, "max_order", c.bessel_check.max_order, "bessel_check");
    read(b, "mode_count", c.bessel_check.mode_count, "bessel_check");
    read(b, "tolerance", c.bessel_check.tolerance, "bessel_check");
  }
  if (j.contains("output")) {
    std::string out;
    read(j, "output", out, "config");
    c.output = out;
  }
  c.validate();
  return c;
}

ScenarioConfig config_from_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  return config_from_json(j);
}

std::string serialize(const ScenarioConfig& config) { return config_to_json(config).dump(2) + "\n"; }

bool operator==(const ScenarioConfig& a, const ScenarioConfig& b) { return serialize(a) == serialize(b); }

}  // namespace freqgate::app
