#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "freqgate/design/problem.hpp"
#include "freqgate/design/studies.hpp"
#include "freqgate/lab/counting.hpp"
#include "freqgate/matrix_json.hpp"

namespace freqgate::app {

/// Malformed or inconsistent scenario input. Raised before any computation.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

enum class ScenarioKind { design, characterize, guardband, visibility, scaling, bound_check, bessel_check };

/// Config spelling: "design", "characterize", "guardband-sweep", "visibility",
/// "scaling", "bound-check", "bessel-check".
std::string to_string(ScenarioKind kind);
ScenarioKind scenario_from_string(const std::string& name);
/// Subcommand name; same as to_string except "guardband".
std::string command_name(ScenarioKind kind);

/// Where the hidden truth of the virtual apparatus comes from.
///   design                 optimize the design section, use the full cascade
///   target                 the ideal design target on the window
///   measured_beamsplitter  published 2x2 example
///   measured_tritter       published 3x3 example
///   matrix                 `matrix`, embedded on the window
struct ApparatusSpec {
  std::string truth = "design";
  std::optional<Eigen::MatrixXcd> matrix;
  double insertion_loss = 1.0;
  double osa_noise_sigma = 0.0;
  std::uint64_t seed = 0;
  int samples = 16;  // phase points per scan
  int repeats = 1;   // reconstructions, acquisition seeds seed .. seed + repeats - 1
};

struct CountingSpec {
  lab::CountingSettings settings;
  int seeds = 10;  // runs with seeds settings.seed .. + seeds - 1
};

struct GuardbandSpec {
  std::vector<int> separations{0, 1, 2, 3, 4, 5, 6, 8};
  double tolerance = 1e-4;
};

struct ScalingSpec {
  int max_dim = 7;
  design::ScalingOptions options;
};

struct BoundCheckSpec {
  std::vector<int> dims{2, 3, 4, 5};
  design::SingleEomProblem search;  // dim is overridden per row
};

struct BesselCheckSpec {
  std::vector<double> betas{0.25, 0.817, 1.0578, 2.4048, 5.0};
  int max_order = 10;
  int mode_count = 128;
  double tolerance = 1e-10;
};

struct ScenarioConfig {
  ScenarioKind kind = ScenarioKind::design;
  design::DesignProblem design;
  ApparatusSpec apparatus;
  CountingSpec counting;
  GuardbandSpec guardband;
  ScalingSpec scaling;
  BoundCheckSpec bound_check;
  BesselCheckSpec bessel_check;
  std::optional<std::string> output;

  /// Default scenario of a given kind.
  static ScenarioConfig defaults(ScenarioKind kind);

  /// Throws ConfigError naming the first offending field.
  void validate() const;

  /// Overrides every seed the scenario consumes.
  void apply_seed(std::uint64_t seed);
  /// The seed recorded in the manifest.
  std::uint64_t primary_seed() const;
};

/// Every section is written, so parse(serialize(c)) reproduces c exactly.
json config_to_json(const ScenarioConfig& config);
/// Missing keys keep the defaults of the scenario kind; unknown keys are
/// rejected. Throws ConfigError.
ScenarioConfig config_from_json(const json& j);
ScenarioConfig config_from_text(const std::string& text);
/// Canonical serialized form; the manifest hash is taken over these bytes.
std::string serialize(const ScenarioConfig& config);

bool operator==(const ScenarioConfig& a, const ScenarioConfig& b);

}  // namespace freqgate::app
