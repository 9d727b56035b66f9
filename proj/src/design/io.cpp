#include "freqgate/design/io.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "freqgate/metrics.hpp"

namespace freqgate::design {
namespace {

json rounded(const std::vector<double>& v) {
  json out = json::array();
  for (double x : v) out.push_back(round_significant(x, 12));
  return out;
}

std::string csv_number(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", x);
  return buf;
}

bool same_matrix(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  return a.rows() == b.rows() && a.cols() == b.cols() && (a - b).cwiseAbs().maxCoeff() < 1e-15;
}

}  // namespace

json target_to_json(const GateTarget& target) {
  const int d = target.dim();
  if (d == 2 && same_matrix(target.matrix(), hadamard_target().matrix())) return {{"kind", "hadamard"}};
  if (d >= 2 && same_matrix(target.matrix(), dft_target(d).matrix())) return {{"kind", "dft"}, {"dim", d}};
  // Full precision: rounding would break the unitarity check on reload.
  json rows = json::array();
  for (int r = 0; r < d; ++r) {
    json row = json::array();
    for (int c = 0; c < d; ++c) row.push_back({target.matrix()(r, c).real(), target.matrix()(r, c).imag()});
    rows.push_back(std::move(row));
  }
  return {{"kind", "matrix"}, {"name", target.name()}, {"matrix", rows}};
}

GateTarget target_from_json(const json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "hadamard") return hadamard_target();
  if (kind == "dft") return dft_target(j.at("dim").get<int>());
  if (kind == "matrix") return GateTarget(matrix_from_json(j.at("matrix")), j.value("name", std::string("custom")));
  throw std::invalid_argument("unknown target kind '" + kind + "' (expected hadamard, dft or matrix)");
}

json problem_to_json(const DesignProblem& p) {
  return {{"target", target_to_json(p.target)},
          {"lattice", lattice_to_json(p.lattice)},
          {"harmonics", p.harmonics},
          {"fidelity_floor", p.fidelity_floor},
          {"shaper_window", p.shaper_window},
          {"restarts", p.restarts},
          {"iteration_budget", p.iteration_budget},
          {"master_seed", p.master_seed},
          {"goal", to_string(p.goal)},
          {"start", to_string(p.start)},
          {"start_amplitude_max", p.start_amplitude_max},
          {"screen_iterations", p.screen_iterations},
          {"polish_count", p.polish_count}};
}

DesignProblem problem_from_json(const json& j) {
  DesignProblem p;
  if (j.contains("target")) p.target = target_from_json(j.at("target"));
  p.lattice = j.contains("lattice") ? lattice_from_json(j.at("lattice")) : ModeLattice(128, p.target.dim());
  p.harmonics = j.value("harmonics", p.harmonics);
  p.fidelity_floor = j.value("fidelity_floor", p.fidelity_floor);
  p.shaper_window = j.value("shaper_window", p.shaper_window);
  p.restarts = j.value("restarts", p.restarts);
  p.iteration_budget = j.value("iteration_budget", p.iteration_budget);
  p.master_seed = j.value("master_seed", p.master_seed);
  if (j.contains("goal")) p.goal = goal_from_string(j.at("goal").get<std::string>());
  if (j.contains("start")) p.start = start_from_string(j.at("start").get<std::string>());
  p.start_amplitude_max = j.value("start_amplitude_max", p.start_amplitude_max);
  p.screen_iterations = j.value("screen_iterations", p.screen_iterations);
  p.polish_count = j.value("polish_count", p.polish_count);
  p.validate();
  return p;
}

json parameters_to_json(const ParameterVector& v) {
  return {{"shaper_phases", rounded(v.shaper)},
          {"eom1", {{"amplitudes", rounded(v.first_amplitudes)}, {"phases", rounded(v.first_phases)}}},
          {"eom2", {{"amplitudes", rounded(v.second_amplitudes)}, {"phases", rounded(v.second_phases)}}}};
}

ParameterVector parameters_from_json(const json& j) {
  ParameterVector v;
  v.shaper = j.at("shaper_phases").get<std::vector<double>>();
  v.first_amplitudes = j.at("eom1").at("amplitudes").get<std::vector<double>>();
  v.first_phases = j.at("eom1").at("phases").get<std::vector<double>>();
  v.second_amplitudes = j.at("eom2").at("amplitudes").get<std::vector<double>>();
  v.second_phases = j.at("eom2").at("phases").get<std::vector<double>>();
  const std::size_t p = v.first_amplitudes.size();
  if (v.first_phases.size() != p || v.second_amplitudes.size() != p || v.second_phases.size() != p) {
    throw std::invalid_argument("parameters: drive arrays must share one length");
  }
  return ParameterVector::from_flat(v.flat(), v.shaper_window(), static_cast<int>(p));
}

json result_to_json(const DesignResult& r, bool include_wall_time) {
  json restarts = json::array();
  for (const auto& s : r.restarts) {
    restarts.push_back({{"index", s.index},
                        {"objective", round_significant(s.objective, 12)},
                        {"fidelity", round_significant(s.fidelity, 12)},
                        {"success_probability", round_significant(s.success_probability, 12)},
                        {"iterations", s.iterations},
                        {"evaluations", s.evaluations},
                        {"feasible", s.feasible},
                        {"polished", s.polished},
                        {"stop_reason", s.stop_reason}});
  }
  json out = {{"problem", problem_to_json(r.problem)},
              {"parameters", parameters_to_json(r.parameters)},
              {"metrics",
               {{"fidelity", round_significant(r.fidelity, 12)},
                {"success_probability", round_significant(r.success_probability, 12)},
                {"objective", round_significant(r.objective, 12)}}},
              {"converged", r.converged},
              {"winner", r.winner},
              {"restarts", restarts},
              {"aliasing",
               {{"mode_count", r.aliasing.mode_count},
                {"fidelity", round_significant(r.aliasing.fidelity, 12)},
                {"success_probability", round_significant(r.aliasing.success_probability, 12)},
                {"delta_fidelity", round_significant(r.aliasing.delta_fidelity, 12)},
                {"delta_success", round_significant(r.aliasing.delta_success, 12)}}},
              {"stamp",
               {{"seed", r.problem.master_seed},
                {"mode_count", r.problem.lattice.mode_count()},
                {"harmonics", r.problem.harmonics}}}};
  if (include_wall_time) out["wall_time_s"] = r.wall_time_s;
  return out;
}

DesignResult result_from_json(const json& j) {
  DesignResult r;
  r.problem = problem_from_json(j.at("problem"));
  r.parameters = parameters_from_json(j.at("parameters"));
  if (r.parameters.shaper_window() != r.problem.shaper_window || r.parameters.harmonics() != r.problem.harmonics) {
    throw std::invalid_argument("design result: parameters do not match the problem");
  }
  const auto& m = j.at("metrics");
  r.fidelity = m.at("fidelity").get<double>();
  r.success_probability = m.at("success_probability").get<double>();
  r.objective = m.value("objective", 0.0);
  r.converged = j.value("converged", false);
  r.winner = j.value("winner", 0);
  for (const auto& s : j.value("restarts", json::array())) {
    RestartSummary rs;
    rs.index = s.value("index", 0);
    rs.objective = s.value("objective", 0.0);
    rs.fidelity = s.value("fidelity", 0.0);
    rs.success_probability = s.value("success_probability", 0.0);
    rs.iterations = s.value("iterations", 0);
    rs.evaluations = s.value("evaluations", 0);
    rs.feasible = s.value("feasible", false);
    rs.polished = s.value("polished", true);
    rs.stop_reason = s.value("stop_reason", std::string());
    r.restarts.push_back(std::move(rs));
  }
  if (j.contains("aliasing")) {
    const auto& a = j.at("aliasing");
    r.aliasing = {a.value("mode_count", 0), a.value("fidelity", 0.0), a.value("success_probability", 0.0),
                  a.value("delta_fidelity", 0.0), a.value("delta_success", 0.0)};
  }
  r.wall_time_s = j.value("wall_time_s", 0.0);
  return r;
}

std::string scaling_csv(const std::vector<ScalingRow>& rows) {
  std::ostringstream os;
  os << "d,p,fidelity,success_probability,product,converged\n";
  for (const auto& r : rows) {
    os << r.dim << ',' << r.harmonics << ',' << csv_number(r.fidelity) << ','
       << csv_number(r.success_probability) << ',' << csv_number(r.product) << ','
       << (r.converged ? 1 : 0) << '\n';
  }
  return os.str();
}

json single_eom_to_json(const SingleEomResult& r) {
  json harmonics = json::array();
  for (const auto& h : r.drive.harmonics()) {
    harmonics.push_back({{"order", h.order},
                         {"amplitude", round_significant(h.amplitude, 12)},
                         {"phase", round_significant(h.phase, 12)}});
  }
  json per_restart = json::array();
  for (double p : r.restart_success) {
    per_restart.push_back(std::isnan(p) ? json(nullptr) : json(round_significant(p, 12)));
  }
  return {{"dim", r.dim},
          {"ceiling", round_significant(r.ceiling, 12)},
          {"scatter_bound", round_significant(r.scatter_bound, 12)},
          {"success_probability", round_significant(r.success_probability, 12)},
          {"imbalance", round_significant(r.imbalance, 12)},
          {"balanced", r.balanced},
          {"winner", r.winner},
          {"drive", harmonics},
          {"restart_success", per_restart}};
}

}  // namespace freqgate::design
