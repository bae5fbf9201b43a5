#pragma once

#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "lattice_dirac.hpp"

namespace fermass {

/// Operator dump: a JSON object
///   {"format": "fermass.lattice_operator", "version": 1, "kind": ..., "sources": [...],
///    "factor_order": ["site", "spinor", "internal"], "sites": S, "spinor_dim": P,
///    "internal_dim": F, "dim": S*P*F, "entries": [re00, im00, re01, im01, ...]}
/// with entries in row-major order. Doubles are written with round-trip precision.
inline nlohmann::ordered_json operator_to_json(const LatticeOperator& op) {
  nlohmann::ordered_json j;
  j["format"] = "fermass.lattice_operator";
  j["version"] = 1;
  j["kind"] = op.kind;
  j["sources"] = op.sources;
  j["factor_order"] = {"site", "spinor", "internal"};
  j["sites"] = op.sites;
  j["spinor_dim"] = op.spinor_dim;
  j["internal_dim"] = op.internal_dim;
  j["dim"] = op.size();
  std::vector<double> entries;
  entries.reserve(static_cast<std::size_t>(2 * op.matrix.size()));
  for (Eigen::Index r = 0; r < op.matrix.rows(); ++r)
    for (Eigen::Index c = 0; c < op.matrix.cols(); ++c) {
      entries.push_back(op.matrix(r, c).real());
      entries.push_back(op.matrix(r, c).imag());
    }
  j["entries"] = std::move(entries);
  return j;
}

inline LatticeOperator operator_from_json(const nlohmann::json& j) {
  if (j.value("format", "") != "fermass.lattice_operator" || j.value("version", 0) != 1)
    throw ModelError("not a fermass.lattice_operator v1 document");
  LatticeOperator op;
  op.kind = j.at("kind").get<std::string>();
  op.sources = j.at("sources").get<std::vector<std::string>>();
  op.sites = j.at("sites").get<int>();
  op.spinor_dim = j.at("spinor_dim").get<int>();
  op.internal_dim = j.at("internal_dim").get<int>();
  const auto n = j.at("dim").get<Eigen::Index>();
  const auto e = j.at("entries").get<std::vector<double>>();
  if (n != static_cast<Eigen::Index>(op.sites) * op.fiber_dim() || static_cast<Eigen::Index>(e.size()) != 2 * n * n)
    throw ModelError("operator dump: inconsistent dimensions");
  op.matrix.resize(n, n);
  std::size_t k = 0;
  for (Eigen::Index r = 0; r < n; ++r)
    for (Eigen::Index c = 0; c < n; ++c, k += 2) op.matrix(r, c) = cplx(e[k], e[k + 1]);
  return op;
}

inline std::string format_g17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

/// CSV with header `index,<column names...>`; values with 17 significant digits.
inline void write_spectra_csv(std::ostream& out, const std::vector<std::string>& names,
                              const std::vector<std::vector<double>>& columns) {
  out << "index";
  for (const auto& n : names) out << ',' << n;
  out << '\n';
  std::size_t rows = 0;
  for (const auto& c : columns) rows = std::max(rows, c.size());
  for (std::size_t i = 0; i < rows; ++i) {
    out << i;
    for (const auto& c : columns) out << ',' << (i < c.size() ? format_g17(c[i]) : "");
    out << '\n';
  }
}

}  // namespace fermass
