#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include <yaml-cpp/yaml.h>

#include "model.hpp"

namespace fermass {

// Model files are YAML. Complex numbers are written as [re, im] pairs and
// matrices as lists of rows of such pairs. Layout:
//
//   schema_version: 1
//   name: ew-reference
//   algebra: {generators: [T1, T2, T3, Y]}
//   representations:
//     higgs: [<matrix for T1>, <matrix for T2>, ...]
//   higgs: {rep: higgs, potential: {kind: mexican_hat, lambda: 1, v: 2}, seed: [[0, 0], [0.3, 0]]}
//   fermions: {left: lepton_L, right: lepton_R}
//   yukawa: {conjugate: [false, false], entries: [{l: 0, r: 0, h: 0, value: [0.5, 0]}, ...]}
//   lattice: {n: 1, L: 4, a: 1, derivative: fourier_spectral}
//   wilson: {theta: [[0.3], [-0.45]]}      # optional, one row per direction
//   fluctuation: {h: 0.25}                 # optional
//   tolerances: {dispersion: 1e-9}         # optional overrides

namespace detail {

inline int line_of(const YAML::Node& n) { return n.Mark().line >= 0 ? n.Mark().line + 1 : -1; }

inline YAML::Node require(const YAML::Node& parent, const std::string& key, const std::string& where) {
  if (!parent.IsMap()) throw ModelError(where + " must be a mapping", line_of(parent));
  YAML::Node n = parent[key];
  if (!n) throw ModelError("missing key '" + key + "' in " + where, line_of(parent));
  return n;
}

template <typename T>
T scalar(const YAML::Node& n, const std::string& what) {
  try {
    return n.as<T>();
  } catch (const YAML::Exception&) {
    throw ModelError("cannot read " + what, line_of(n));
  }
}

inline cplx complex_pair(const YAML::Node& n, const std::string& what) {
  if (!n.IsSequence() || n.size() != 2) throw ModelError(what + ": expected a [re, im] pair", line_of(n));
  return {scalar<double>(n[0], what), scalar<double>(n[1], what)};
}

inline Mat complex_matrix(const YAML::Node& n, const std::string& what) {
  if (!n.IsSequence() || n.size() == 0) throw ModelError(what + ": expected a list of rows", line_of(n));
  const auto rows = static_cast<Eigen::Index>(n.size());
  if (!n[0].IsSequence()) throw ModelError(what + ": row 0 is not a list", line_of(n[0]));
  const auto cols = static_cast<Eigen::Index>(n[0].size());
  Mat m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const auto row = n[static_cast<std::size_t>(i)];
    if (!row.IsSequence() || static_cast<Eigen::Index>(row.size()) != cols)
      throw ModelError(what + ": row " + std::to_string(i) + " has the wrong length", line_of(row));
    for (Eigen::Index j = 0; j < cols; ++j)
      m(i, j) = complex_pair(row[static_cast<std::size_t>(j)], what + "[" + std::to_string(i) + "][" + std::to_string(j) + "]");
  }
  return m;
}

inline Vec complex_vector(const YAML::Node& n, const std::string& what) {
  if (!n.IsSequence()) throw ModelError(what + ": expected a list of [re, im] pairs", line_of(n));
  Vec v(static_cast<Eigen::Index>(n.size()));
  for (std::size_t i = 0; i < n.size(); ++i) v(static_cast<Eigen::Index>(i)) = complex_pair(n[i], what);
  return v;
}

inline void emit_pair(YAML::Emitter& e, cplx z) {
  // + 0.0 turns -0 into 0
  e << YAML::Flow << YAML::BeginSeq << z.real() + 0.0 << z.imag() + 0.0 << YAML::EndSeq;
}

inline void emit_matrix(YAML::Emitter& e, const Mat& m) {
  e << YAML::Flow << YAML::BeginSeq;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    e << YAML::BeginSeq;
    for (Eigen::Index j = 0; j < m.cols(); ++j) emit_pair(e, m(i, j));
    e << YAML::EndSeq;
  }
  e << YAML::EndSeq;
}

}  // namespace detail

inline ModelConfig parse_model(const std::string& text) {
  using namespace detail;
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw ModelError(std::string("YAML parse error: ") + e.msg, e.mark.line >= 0 ? e.mark.line + 1 : -1);
  }
  if (!root || !root.IsMap()) throw ModelError("model file must be a YAML mapping");

  ModelConfig c;
  c.schema_version = scalar<int>(require(root, "schema_version", "model"), "schema_version");
  if (c.schema_version != 1) throw ModelError("unsupported schema_version " + std::to_string(c.schema_version), line_of(root["schema_version"]));
  if (root["name"]) c.name = scalar<std::string>(root["name"], "name");

  const auto algebra = require(root, "algebra", "model");
  const auto labels = require(algebra, "generators", "algebra");
  if (!labels.IsSequence()) throw ModelError("algebra.generators must be a list of labels", line_of(labels));
  for (const auto& l : labels) c.generator_labels.push_back(scalar<std::string>(l, "generator label"));

  const auto reps = require(root, "representations", "model");
  if (!reps.IsMap()) throw ModelError("representations must be a mapping", line_of(reps));
  for (const auto& kv : reps) {
    LieAlgebraRep r;
    r.label = scalar<std::string>(kv.first, "representation name");
    const auto gens = kv.second;
    if (!gens.IsSequence()) throw ModelError("representation '" + r.label + "' must list generator matrices", line_of(gens));
    if (gens.size() != c.generator_labels.size())
      throw ModelError("representation '" + r.label + "' lists " + std::to_string(gens.size()) + " generators, algebra has " +
                           std::to_string(c.generator_labels.size()),
                       line_of(gens));
    for (std::size_t i = 0; i < gens.size(); ++i) {
      const std::string what = "representation '" + r.label + "' generator " + c.generator_labels[i];
      Mat x = complex_matrix(gens[i], what);
      if (x.rows() != x.cols()) throw ModelError(what + " is not square", line_of(gens[i]));
      if (!r.generators.empty() && x.rows() != r.rep_dim())
        throw ModelError(what + " has dimension " + std::to_string(x.rows()) + ", expected " + std::to_string(r.rep_dim()),
                         line_of(gens[i]));
      if (anti_hermiticity_defect(x) > c.tolerances.anti_hermitian)
        throw ModelError(what + " is not anti-Hermitian", line_of(gens[i]));
      r.generators.push_back(std::move(x));
    }
    c.representations.emplace_back(r.label, std::move(r));
  }

  const auto higgs = require(root, "higgs", "model");
  c.higgs_rep = scalar<std::string>(require(higgs, "rep", "higgs"), "higgs.rep");
  const auto pot = require(higgs, "potential", "higgs");
  const auto kind = scalar<std::string>(require(pot, "kind", "higgs.potential"), "potential kind");
  if (kind == "mexican_hat") {
    c.potential = PotentialKind::mexican_hat;
    c.lambda = scalar<double>(require(pot, "lambda", "higgs.potential"), "lambda");
    c.v = scalar<double>(require(pot, "v", "higgs.potential"), "v");
  } else if (kind == "custom_polynomial") {
    c.potential = PotentialKind::custom_polynomial;
    const auto coeffs = require(pot, "coefficients", "higgs.potential");
    if (!coeffs.IsSequence()) throw ModelError("coefficients must be a list", line_of(coeffs));
    for (const auto& x : coeffs) c.coefficients.push_back(scalar<double>(x, "polynomial coefficient"));
  } else {
    throw ModelError("unknown potential kind '" + kind + "'", line_of(pot["kind"]));
  }
  c.seed = complex_vector(require(higgs, "seed", "higgs"), "higgs.seed");

  const auto ferm = require(root, "fermions", "model");
  c.left_rep = scalar<std::string>(require(ferm, "left", "fermions"), "fermions.left");
  c.right_rep = scalar<std::string>(require(ferm, "right", "fermions"), "fermions.right");
  for (const auto* key : {&c.higgs_rep, &c.left_rep, &c.right_rep}) {
    bool found = false;
    for (const auto& [k, r] : c.representations) found = found || k == *key;
    if (!found) throw ModelError("unknown representation '" + *key + "'", line_of(ferm));
  }

  const auto yuk = require(root, "yukawa", "model");
  const int nl = c.rep(c.left_rep).rep_dim(), nr = c.rep(c.right_rep).rep_dim(), nh = c.rep(c.higgs_rep).rep_dim();
  c.yukawa = YukawaMap(nl, nr, nh);
  if (yuk["conjugate"]) {
    const auto flags = yuk["conjugate"];
    if (!flags.IsSequence() || static_cast<int>(flags.size()) != nh)
      throw ModelError("yukawa.conjugate needs one flag per Higgs component", line_of(flags));
    for (int h = 0; h < nh; ++h) c.yukawa.conjugate[h] = scalar<bool>(flags[h], "conjugation flag");
  }
  const auto entries = require(yuk, "entries", "yukawa");
  if (!entries.IsSequence()) throw ModelError("yukawa.entries must be a list", line_of(entries));
  for (const auto& e : entries) {
    const int l = scalar<int>(require(e, "l", "yukawa entry"), "l");
    const int r = scalar<int>(require(e, "r", "yukawa entry"), "r");
    const int h = scalar<int>(require(e, "h", "yukawa entry"), "h");
    if (l < 0 || l >= nl || r < 0 || r >= nr || h < 0 || h >= nh)
      throw ModelError("yukawa entry index out of range", line_of(e));
    c.yukawa.at(l, r, h) = complex_pair(require(e, "value", "yukawa entry"), "yukawa value");
  }

  const auto lat = require(root, "lattice", "model");
  c.lattice.n = scalar<int>(require(lat, "n", "lattice"), "lattice.n");
  c.lattice.L = scalar<int>(require(lat, "L", "lattice"), "lattice.L");
  c.lattice.a = scalar<double>(require(lat, "a", "lattice"), "lattice.a");
  const auto dk = scalar<std::string>(require(lat, "derivative", "lattice"), "lattice.derivative");
  if (dk == "fourier_spectral")
    c.lattice.derivative = DerivativeKind::fourier_spectral;
  else if (dk == "central_difference")
    c.lattice.derivative = DerivativeKind::central_difference;
  else
    throw ModelError("unknown derivative kind '" + dk + "'", line_of(lat["derivative"]));

  if (root["wilson"]) {
    const auto theta = require(root["wilson"], "theta", "wilson");
    if (!theta.IsSequence()) throw ModelError("wilson.theta must be a list of rows", line_of(theta));
    std::vector<RVec> rows;
    for (const auto& row : theta) {
      if (!row.IsSequence()) throw ModelError("wilson.theta rows must be lists", line_of(row));
      RVec t(static_cast<Eigen::Index>(row.size()));
      for (std::size_t i = 0; i < row.size(); ++i) t(static_cast<Eigen::Index>(i)) = scalar<double>(row[i], "theta");
      rows.push_back(std::move(t));
    }
    c.wilson_theta = std::move(rows);
  }
  if (root["fluctuation"]) c.fluctuation_h = scalar<double>(require(root["fluctuation"], "h", "fluctuation"), "fluctuation.h");

  if (root["tolerances"]) {
    const auto tol = root["tolerances"];
    if (!tol.IsMap()) throw ModelError("tolerances must be a mapping", line_of(tol));
    auto fields = c.tolerances.fields();
    for (const auto& kv : tol) {
      const auto key = scalar<std::string>(kv.first, "tolerance name");
      auto it = fields.find(key);
      if (it == fields.end()) throw ModelError("unknown tolerance '" + key + "'", line_of(kv.first));
      *it->second = scalar<double>(kv.second, "tolerance " + key);
    }
  }

  validate_model(c);
  return c;
}

inline ModelConfig load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ModelError("cannot open model file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return parse_model(ss.str());
  } catch (const ModelError& e) {
    throw ModelError(path + ": " + e.what());
  }
}

inline std::string save_model(const ModelConfig& c) {
  using namespace detail;
  YAML::Emitter e;
  e.SetDoublePrecision(17);
  e << YAML::BeginMap;
  e << YAML::Key << "schema_version" << YAML::Value << c.schema_version;
  e << YAML::Key << "name" << YAML::Value << c.name;
  e << YAML::Key << "algebra" << YAML::Value << YAML::BeginMap << YAML::Key << "generators" << YAML::Value << YAML::Flow
    << c.generator_labels << YAML::EndMap;

  e << YAML::Key << "representations" << YAML::Value << YAML::BeginMap;
  for (const auto& [key, r] : c.representations) {
    e << YAML::Key << key << YAML::Value << YAML::BeginSeq;
    for (const auto& g : r.generators) emit_matrix(e, g);
    e << YAML::EndSeq;
  }
  e << YAML::EndMap;

  e << YAML::Key << "higgs" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "rep" << YAML::Value << c.higgs_rep;
  e << YAML::Key << "potential" << YAML::Value << YAML::Flow << YAML::BeginMap;
  if (c.potential == PotentialKind::mexican_hat) {
    e << YAML::Key << "kind" << YAML::Value << "mexican_hat";
    e << YAML::Key << "lambda" << YAML::Value << c.lambda;
    e << YAML::Key << "v" << YAML::Value << c.v;
  } else {
    e << YAML::Key << "kind" << YAML::Value << "custom_polynomial";
    e << YAML::Key << "coefficients" << YAML::Value << YAML::Flow << c.coefficients;
  }
  e << YAML::EndMap;
  e << YAML::Key << "seed" << YAML::Value << YAML::Flow << YAML::BeginSeq;
  for (Eigen::Index i = 0; i < c.seed.size(); ++i) emit_pair(e, c.seed(i));
  e << YAML::EndSeq << YAML::EndMap;

  e << YAML::Key << "fermions" << YAML::Value << YAML::Flow << YAML::BeginMap << YAML::Key << "left" << YAML::Value
    << c.left_rep << YAML::Key << "right" << YAML::Value << c.right_rep << YAML::EndMap;

  e << YAML::Key << "yukawa" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "conjugate" << YAML::Value << YAML::Flow << YAML::BeginSeq;
  for (bool f : c.yukawa.conjugate) e << f;
  e << YAML::EndSeq;
  e << YAML::Key << "entries" << YAML::Value << YAML::BeginSeq;
  for (int l = 0; l < c.yukawa.n_l; ++l)
    for (int r = 0; r < c.yukawa.n_r; ++r)
      for (int h = 0; h < c.yukawa.n_h; ++h) {
        const cplx y = c.yukawa.at(l, r, h);
        if (y == cplx(0.0, 0.0)) continue;
        e << YAML::Flow << YAML::BeginMap << YAML::Key << "l" << YAML::Value << l << YAML::Key << "r" << YAML::Value << r
          << YAML::Key << "h" << YAML::Value << h << YAML::Key << "value" << YAML::Value;
        emit_pair(e, y);
        e << YAML::EndMap;
      }
  e << YAML::EndSeq << YAML::EndMap;

  e << YAML::Key << "lattice" << YAML::Value << YAML::Flow << YAML::BeginMap;
  e << YAML::Key << "n" << YAML::Value << c.lattice.n << YAML::Key << "L" << YAML::Value << c.lattice.L;
  e << YAML::Key << "a" << YAML::Value << c.lattice.a << YAML::Key << "derivative" << YAML::Value
    << to_string(c.lattice.derivative) << YAML::EndMap;

  if (c.wilson_theta) {
    e << YAML::Key << "wilson" << YAML::Value << YAML::BeginMap << YAML::Key << "theta" << YAML::Value << YAML::Flow
      << YAML::BeginSeq;
    for (const auto& t : *c.wilson_theta) {
      e << YAML::BeginSeq;
      for (Eigen::Index i = 0; i < t.size(); ++i) e << t(i);
      e << YAML::EndSeq;
    }
    e << YAML::EndSeq << YAML::EndMap;
  }
  e << YAML::Key << "fluctuation" << YAML::Value << YAML::Flow << YAML::BeginMap << YAML::Key << "h" << YAML::Value
    << c.fluctuation_h << YAML::EndMap;

  const Tolerances defaults;
  auto cur = const_cast<Tolerances&>(c.tolerances).fields();
  auto def = const_cast<Tolerances&>(defaults).fields();
  bool any = false;
  for (const auto& [k, p] : cur) any = any || *p != *def.at(k);
  if (any) {
    e << YAML::Key << "tolerances" << YAML::Value << YAML::BeginMap;
    for (const auto& [k, p] : cur)
      if (*p != *def.at(k)) e << YAML::Key << k << YAML::Value << *p;
    e << YAML::EndMap;
  }
  e << YAML::EndMap;
  return std::string(e.c_str()) + "\n";
}

}  // namespace fermass
