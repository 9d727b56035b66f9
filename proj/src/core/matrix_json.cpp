#include "freqgate/matrix_json.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <stdexcept>

namespace freqgate {

double round_significant(double value, int digits) {
  if (!std::isfinite(value) || value == 0.0) return value;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, value);
  return std::strtod(buf, nullptr);
}

json matrix_to_json(const Eigen::MatrixXcd& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      row.push_back({round_significant(m(r, c).real(), 12), round_significant(m(r, c).imag(), 12)});
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::MatrixXcd matrix_from_json(const json& j) {
  if (!j.is_array() || j.empty()) throw std::invalid_argument("matrix json: expected non-empty array of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = static_cast<Eigen::Index>(j.at(0).size());
  Eigen::MatrixXcd m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const auto& row = j.at(static_cast<std::size_t>(r));
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
      throw std::invalid_argument("matrix json: ragged rows");
    }
    for (Eigen::Index c = 0; c < cols; ++c) {
      const auto& e = row.at(static_cast<std::size_t>(c));
      if (e.is_number()) {
        m(r, c) = {e.get<double>(), 0.0};
      } else if (e.is_array() && e.size() == 2) {
        m(r, c) = {e[0].get<double>(), e[1].get<double>()};
      } else {
        throw std::invalid_argument("matrix json: entries must be [re, im] pairs");
      }
    }
  }
  return m;
}

json lattice_to_json(const ModeLattice& lattice) {
  return {{"mode_count", lattice.mode_count()},
          {"computational_dim", lattice.dim()},
          {"window_offset", lattice.window_offset()},
          {"spacing_rad_per_s", lattice.spacing()}};
}

ModeLattice lattice_from_json(const json& j) {
  std::optional<int> offset;
  if (j.contains("window_offset") && !j["window_offset"].is_null()) offset = j["window_offset"].get<int>();
  return ModeLattice(j.at("mode_count").get<int>(), j.at("computational_dim").get<int>(), offset,
                     j.value("spacing_rad_per_s", ModeLattice::kDefaultSpacing));
}

json transfer_to_json(const TransferMatrix& v) {
  return {{"lattice", lattice_to_json(v.lattice())},
          {"unitary", v.unitary()},
          {"entries", matrix_to_json(v.entries())}};
}

TransferMatrix transfer_from_json(const json& j) {
  return TransferMatrix(matrix_from_json(j.at("entries")), lattice_from_json(j.at("lattice")),
                        j.value("unitary", false));
}

}  // namespace freqgate
