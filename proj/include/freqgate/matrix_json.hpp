#pragma once

#include <json.hpp>

#include <Eigen/Dense>

#include "freqgate/lattice.hpp"
#include "freqgate/transfer.hpp"

namespace freqgate {

using json = nlohmann::json;

/// Rounds to `digits` significant decimal digits (12 for JSON documents,
/// 9 for CSV). Non-finite values pass through unchanged.
double round_significant(double value, int digits);

/// Row-major array of rows, each entry a [re, im] pair rounded to 12
/// significant digits.
json matrix_to_json(const Eigen::MatrixXcd& m);
Eigen::MatrixXcd matrix_from_json(const json& j);

json lattice_to_json(const ModeLattice& lattice);
ModeLattice lattice_from_json(const json& j);

/// {"lattice": ..., "unitary": bool, "entries": matrix}
json transfer_to_json(const TransferMatrix& v);
TransferMatrix transfer_from_json(const json& j);

}  // namespace freqgate
