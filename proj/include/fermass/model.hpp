#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lattice_dirac.hpp"

namespace fermass {

/// Every acceptance threshold in one place. Names double as the keys accepted
/// under `tolerances:` in model files.
struct Tolerances {
  double clifford = 1e-12;
  double anti_hermitian = 1e-12;
  double closure = 1e-10;
  double rank_cut = 1e-9;          // isotropy / Goldstone singular value cut (relative)
  double gradient = 1e-8;
  double vacuum_radius = 1e-8;
  double goldstone_hessian = 1e-7;
  double transversal_hessian = 1e-6;  // relative, against the closed-form radial curvature
  double potential_invariance = 1e-9;
  double equivariance = 1e-12;
  double block_structure = 1e-12;
  double group = 1e-8;             // eigenvalue grouping (relative)
  double commutant = 1e-12;
  double orbit = 1e-9;
  double reconstruction = 1e-10;
  double hermitian = 1e-10;
  double dispersion = 1e-9;
  double contraction = 1e-12;
  double leakage = 1e-10;
  double trace = 1e-9;
  double mean_mass_identity = 1e-12;
  double curvature = 1e-12;
  double flatness = 1e-12;
  double gauge_invariance = 1e-12;
  double gauge_spectrum = 1e-10;
  double wilson = 1e-9;
  double fluctuation = 1e-9;

  /// Pointer table for name-based overrides; algorithmic cuts are excluded from scaling.
  std::map<std::string, double*> fields() {
    return {{"clifford", &clifford},
            {"anti_hermitian", &anti_hermitian},
            {"closure", &closure},
            {"rank_cut", &rank_cut},
            {"gradient", &gradient},
            {"vacuum_radius", &vacuum_radius},
            {"goldstone_hessian", &goldstone_hessian},
            {"transversal_hessian", &transversal_hessian},
            {"potential_invariance", &potential_invariance},
            {"equivariance", &equivariance},
            {"block_structure", &block_structure},
            {"group", &group},
            {"commutant", &commutant},
            {"orbit", &orbit},
            {"reconstruction", &reconstruction},
            {"hermitian", &hermitian},
            {"dispersion", &dispersion},
            {"contraction", &contraction},
            {"leakage", &leakage},
            {"trace", &trace},
            {"mean_mass_identity", &mean_mass_identity},
            {"curvature", &curvature},
            {"flatness", &flatness},
            {"gauge_invariance", &gauge_invariance},
            {"gauge_spectrum", &gauge_spectrum},
            {"wilson", &wilson},
            {"fluctuation", &fluctuation}};
  }

  Tolerances scaled(double factor) const {
    Tolerances t = *this;
    for (auto& [name, ptr] : t.fields())
      if (name != "rank_cut" && name != "group") *ptr *= factor;
    return t;
  }

  bool operator==(const Tolerances& o) const {
    auto a = const_cast<Tolerances*>(this)->fields();
    auto b = const_cast<Tolerances&>(o).fields();
    for (const auto& [k, p] : a)
      if (*p != *b.at(k)) return false;
    return true;
  }
};

/// Everything a run needs: the algebra and its representations, Higgs data,
/// chiral fermions, Yukawa tensor, lattice and optional Wilson line.
struct ModelConfig {
  int schema_version = 1;
  std::string name;
  std::vector<std::string> generator_labels;
  std::vector<std::pair<std::string, LieAlgebraRep>> representations;

  std::string higgs_rep;
  PotentialKind potential = PotentialKind::mexican_hat;
  double lambda = 1.0;
  double v = 1.0;
  std::vector<double> coefficients;
  Vec seed;

  std::string left_rep;
  std::string right_rep;
  YukawaMap yukawa;

  TorusLattice lattice;
  std::optional<std::vector<RVec>> wilson_theta;
  double fluctuation_h = 0.25;

  Tolerances tolerances;

  const LieAlgebraRep& rep(const std::string& key) const {
    for (const auto& [k, r] : representations)
      if (k == key) return r;
    throw ModelError("unknown representation '" + key + "'");
  }

  HiggsModel higgs_model() const {
    return potential == PotentialKind::mexican_hat ? mexican_hat(rep(higgs_rep), lambda, v)
                                                   : custom_polynomial(rep(higgs_rep), coefficients);
  }

  ChiralFermionRep fermions() const { return make_chiral(rep(left_rep), rep(right_rep)); }
};

inline bool operator==(const YukawaMap& a, const YukawaMap& b) {
  return a.n_l == b.n_l && a.n_r == b.n_r && a.n_h == b.n_h && a.tensor == b.tensor && a.conjugate == b.conjugate;
}

inline bool operator==(const ModelConfig& a, const ModelConfig& b) {
  if (a.schema_version != b.schema_version || a.name != b.name || a.generator_labels != b.generator_labels) return false;
  if (a.representations.size() != b.representations.size()) return false;
  for (std::size_t i = 0; i < a.representations.size(); ++i) {
    const auto& [ka, ra] = a.representations[i];
    const auto& [kb, rb] = b.representations[i];
    if (ka != kb || ra.dim_g() != rb.dim_g()) return false;
    for (int g = 0; g < ra.dim_g(); ++g)
      if (ra.generators[g] != rb.generators[g]) return false;
  }
  auto same_theta = [](const auto& x, const auto& y) {
    if (x.has_value() != y.has_value()) return false;
    if (!x) return true;
    if (x->size() != y->size()) return false;
    for (std::size_t i = 0; i < x->size(); ++i)
      if ((*x)[i] != (*y)[i]) return false;
    return true;
  };
  return a.higgs_rep == b.higgs_rep && a.potential == b.potential && a.lambda == b.lambda && a.v == b.v &&
         a.coefficients == b.coefficients && a.seed == b.seed && a.left_rep == b.left_rep &&
         a.right_rep == b.right_rep && a.yukawa == b.yukawa && a.lattice.n == b.lattice.n &&
         a.lattice.L == b.lattice.L && a.lattice.a == b.lattice.a && a.lattice.derivative == b.lattice.derivative &&
         same_theta(a.wilson_theta, b.wilson_theta) && a.fluctuation_h == b.fluctuation_h &&
         a.tolerances == b.tolerances;
}

/// Re-checks representation invariants and cross-section consistency.
/// Throws ModelError naming the failing item.
inline void validate_model(const ModelConfig& c) {
  if (c.schema_version != 1) throw ModelError("unsupported schema_version " + std::to_string(c.schema_version));
  const int m = static_cast<int>(c.generator_labels.size());
  for (const auto& [key, r] : c.representations) {
    if (r.dim_g() != m)
      throw ModelError("representation '" + key + "' has " + std::to_string(r.dim_g()) + " generators, algebra has " +
                       std::to_string(m));
    try {
      validate_rep(r, c.tolerances.anti_hermitian, c.tolerances.closure);
    } catch (const std::exception& e) {
      throw ModelError(std::string("representation validation failed: ") + e.what());
    }
  }
  const auto& h = c.rep(c.higgs_rep);
  const auto& l = c.rep(c.left_rep);
  const auto& r = c.rep(c.right_rep);
  if (c.seed.size() != h.rep_dim()) throw ModelError("higgs seed has wrong length");
  if (c.yukawa.n_h != h.rep_dim() || c.yukawa.n_l != l.rep_dim() || c.yukawa.n_r != r.rep_dim())
    throw ModelError("yukawa tensor shape does not match the representations");
  try {
    validate_potential(c.higgs_model());
    validate_lattice(c.lattice);
  } catch (const std::exception& e) {
    throw ModelError(e.what());
  }
  if (c.wilson_theta && static_cast<int>(c.wilson_theta->size()) != c.lattice.dim())
    throw ModelError("wilson theta needs one row per lattice direction");
}

}  // namespace fermass
