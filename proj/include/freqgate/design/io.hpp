#pragma once

#include <string>
#include <vector>

#include "freqgate/design/problem.hpp"
#include "freqgate/design/studies.hpp"
#include "freqgate/matrix_json.hpp"

namespace freqgate::design {

/// {"kind": "hadamard"} | {"kind": "dft", "dim": d} |
/// {"kind": "matrix", "name": ..., "matrix": [[re, im], ...]}
json target_to_json(const GateTarget& target);
GateTarget target_from_json(const json& j);

json problem_to_json(const DesignProblem& problem);
/// Missing keys take the DesignProblem defaults; the lattice defaults to
/// M = 128 around the target's dimension.
DesignProblem problem_from_json(const json& j);

json parameters_to_json(const ParameterVector& params);
ParameterVector parameters_from_json(const json& j);

/// Wall time is left out unless asked for, so that reruns give identical
/// documents.
json result_to_json(const DesignResult& result, bool include_wall_time = false);
DesignResult result_from_json(const json& j);

/// Header plus one row per dimension, 9 significant digits.
std::string scaling_csv(const std::vector<ScalingRow>& rows);

json single_eom_to_json(const SingleEomResult& result);

}  // namespace freqgate::design
