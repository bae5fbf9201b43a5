#pragma once

#include "model.hpp"

namespace fermass::registry {

/// su(2) (+) u(1) on a doublet with hypercharge y: T_i = -(i/2) sigma_i, Y = -i y Id.
inline LieAlgebraRep ew_doublet(double y, std::string label) {
  LieAlgebraRep r;
  r.label = std::move(label);
  for (int k = 1; k <= 3; ++k) r.generators.push_back(-0.5 * kI * detail::pauli(k));
  r.generators.push_back(-kI * y * Mat::Identity(2, 2));
  return r;
}

inline LieAlgebraRep ew_singlet(double y, std::string label) {
  LieAlgebraRep r;
  r.label = std::move(label);
  for (int k = 0; k < 3; ++k) r.generators.push_back(Mat::Zero(1, 1));
  r.generators.push_back(-kI * y * Mat::Identity(1, 1));
  return r;
}

/// Electroweak lepton sector: Higgs doublet (y=+1, lambda=1, v=2), left doublet
/// (y=-1), right singlet (y=-2), single coupling y_e = 0.5 to the lower slot.
inline ModelConfig ew_reference(double y_e = 0.5, double y_right = -2.0) {
  ModelConfig c;
  c.name = "ew-reference";
  c.generator_labels = {"T1", "T2", "T3", "Y"};
  c.representations = {{"higgs", ew_doublet(1.0, "higgs")},
                       {"lepton_L", ew_doublet(-1.0, "lepton_L")},
                       {"lepton_R", ew_singlet(y_right, "lepton_R")}};
  c.higgs_rep = "higgs";
  c.potential = PotentialKind::mexican_hat;
  c.lambda = 1.0;
  c.v = 2.0;
  c.seed = Vec::Zero(2);
  c.seed(1) = 0.3;
  c.left_rep = "lepton_L";
  c.right_rep = "lepton_R";
  c.yukawa = YukawaMap(2, 1, 2);
  c.yukawa.at(0, 0, 0) = y_e;
  c.yukawa.at(1, 0, 1) = y_e;
  c.lattice = TorusLattice{1, 4, 1.0, DerivativeKind::fourier_spectral};
  c.wilson_theta = std::vector<RVec>{RVec::Constant(1, 0.3), RVec::Constant(1, -0.45)};
  return c;
}

/// Down-type quark sector: left doublet y = 1/3, right singlet y = -2/3.
/// Electric charges: up_L 2/3 (massless here), down -1/3 (massive).
inline ModelConfig ew_down_quark(double y_d = 0.5) {
  ModelConfig c = ew_reference(y_d);
  c.name = "ew-down-quark";
  c.representations = {{"higgs", ew_doublet(1.0, "higgs")},
                       {"quark_L", ew_doublet(1.0 / 3.0, "quark_L")},
                       {"down_R", ew_singlet(-2.0 / 3.0, "down_R")}};
  c.left_rep = "quark_L";
  c.right_rep = "down_R";
  return c;
}

/// Up-type quark sector coupling through the conjugate doublet i sigma2 phi^*:
/// M(phi) = y_u (phi_2^*, -phi_1^*)^T, right singlet y = 4/3.
inline ModelConfig ew_up_quark(double y_u = 0.5) {
  ModelConfig c = ew_reference(y_u);
  c.name = "ew-up-quark";
  c.representations = {{"higgs", ew_doublet(1.0, "higgs")},
                       {"quark_L", ew_doublet(1.0 / 3.0, "quark_L")},
                       {"up_R", ew_singlet(4.0 / 3.0, "up_R")}};
  c.left_rep = "quark_L";
  c.right_rep = "up_R";
  c.yukawa = YukawaMap(2, 1, 2);
  c.yukawa.at(0, 0, 1) = y_u;
  c.yukawa.at(1, 0, 0) = -y_u;
  c.yukawa.conjugate = {true, true};
  return c;
}

inline LieAlgebraRep u1_charge(double q, int dim, std::string label) {
  LieAlgebraRep r;
  r.label = std::move(label);
  r.generators.push_back(-kI * q * Mat::Identity(dim, dim));
  return r;
}

/// u(1) acting on C by phase (charge 1), fermions L charge 1, R charge 0.
inline ModelConfig u1_phase(double y = 0.5) {
  ModelConfig c;
  c.name = "u1-phase";
  c.generator_labels = {"Q"};
  c.representations = {{"higgs", u1_charge(1.0, 1, "higgs")},
                       {"psi_L", u1_charge(1.0, 1, "psi_L")},
                       {"psi_R", u1_charge(0.0, 1, "psi_R")}};
  c.higgs_rep = "higgs";
  c.lambda = 1.0;
  c.v = 1.0;
  c.seed = Vec::Constant(1, cplx(0.2, 0.1));
  c.left_rep = "psi_L";
  c.right_rep = "psi_R";
  c.yukawa = YukawaMap(1, 1, 1);
  c.yukawa.at(0, 0, 0) = y;
  c.lattice = TorusLattice{1, 4, 1.0, DerivativeKind::fourier_spectral};
  return c;
}

}  // namespace fermass::registry
