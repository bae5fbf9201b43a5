#pragma once

#include <cstdint>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "higgs_vacuum.hpp"

namespace fermass {

/// Z2-graded fermion representation rho_F = rho_L (+) rho_R.
struct ChiralFermionRep {
  LieAlgebraRep rep_L;
  LieAlgebraRep rep_R;
  LieAlgebraRep total;
  Mat grading;  // diag(+Id_L, -Id_R)

  int n_l() const { return rep_L.rep_dim(); }
  int n_r() const { return rep_R.rep_dim(); }
  int n_f() const { return total.rep_dim(); }
};

inline ChiralFermionRep make_chiral(LieAlgebraRep left, LieAlgebraRep right) {
  ChiralFermionRep f;
  f.total = direct_sum({left, right});
  f.rep_L = std::move(left);
  f.rep_R = std::move(right);
  f.grading = Mat::Identity(f.n_f(), f.n_f());
  f.grading.bottomRightCorner(f.n_r(), f.n_r()) *= -1.0;
  return f;
}

/// Yukawa coupling tensor. The L->R block is M(phi)_{lr} = sum_h Y_{lrh} phi_h
/// (phi_h conjugated where conjugate[h] is set); the R->L block is M(phi)^dagger,
/// so G_Y(phi) = i [[0, M], [M^dagger, 0]] is odd and anti-Hermitian.
struct YukawaMap {
  int n_l = 0, n_r = 0, n_h = 0;
  std::vector<cplx> tensor;  // index (l * n_r + r) * n_h + h
  std::vector<bool> conjugate;

  YukawaMap() = default;
  YukawaMap(int nl, int nr, int nh)
      : n_l(nl), n_r(nr), n_h(nh), tensor(static_cast<std::size_t>(nl * nr * nh)), conjugate(nh, false) {}

  cplx& at(int l, int r, int h) { return tensor[static_cast<std::size_t>((l * n_r + r) * n_h + h)]; }
  cplx at(int l, int r, int h) const { return tensor[static_cast<std::size_t>((l * n_r + r) * n_h + h)]; }
  int n_f() const { return n_l + n_r; }

  Mat block(const Vec& phi) const {
    if (phi.size() != n_h)
      throw DimensionMismatch("YukawaMap: Higgs vector has length " + std::to_string(phi.size()) + ", expected " +
                              std::to_string(n_h));
    Mat m = Mat::Zero(n_l, n_r);
    for (int l = 0; l < n_l; ++l)
      for (int r = 0; r < n_r; ++r)
        for (int h = 0; h < n_h; ++h) m(l, r) += at(l, r, h) * (conjugate[h] ? std::conj(phi(h)) : phi(h));
    return m;
  }
};

inline Mat apply_yukawa(const YukawaMap& y, const Vec& phi) {
  const Mat m = y.block(phi);
  Mat g = Mat::Zero(y.n_f(), y.n_f());
  g.topRightCorner(y.n_l, y.n_r) = kI * m;
  g.bottomLeftCorner(y.n_r, y.n_l) = kI * m.adjoint();
  return g;
}

/// max over generators X and real basis vectors e of C^{N_H} (e_h and i e_h) of
/// |[rho_F'(X), G_Y(e)] - G_Y(rho_H'(X) e)|.
inline double check_equivariance(const YukawaMap& y, const LieAlgebraRep& rep_H, const ChiralFermionRep& f) {
  if (rep_H.dim_g() != f.total.dim_g()) throw DimensionMismatch("check_equivariance: algebra dimensions differ");
  if (rep_H.rep_dim() != y.n_h || f.n_l() != y.n_l || f.n_r() != y.n_r)
    throw DimensionMismatch("check_equivariance: Yukawa tensor shape does not match representations");
  double worst = 0.0;
  for (int i = 0; i < rep_H.dim_g(); ++i) {
    for (int h = 0; h < y.n_h; ++h) {
      for (cplx unit : {cplx(1.0, 0.0), kI}) {
        Vec e = Vec::Zero(y.n_h);
        e(h) = unit;
        const Mat lhs = commutator(f.total.generators[i], apply_yukawa(y, e));
        const Mat rhs = apply_yukawa(y, rep_H.generators[i] * e);
        worst = std::max(worst, max_abs(Mat(lhs - rhs)));
      }
    }
  }
  return worst;
}

struct EigenBlock {
  double m2 = 0.0;
  Mat left;   // orthonormal columns in C^{N_L}
  Mat right;  // orthonormal columns in C^{N_R}
};

struct MassData {
  int n_l = 0, n_r = 0;
  Mat D;    // G_Y(z0), odd anti-Hermitian
  Mat M_F;  // upper-right block of -i D
  std::vector<double> spectrum_sq;  // eigenvalues of m_F^2 over the full fiber, ascending
  std::vector<EigenBlock> eigenspaces;

  int n_f() const { return n_l + n_r; }
  /// m_F^2 = -D^2 = diag(M M^dagger, M^dagger M)
  Mat mass_squared() const { return -D * D; }
};

inline constexpr double kDefaultGroupTol = 1e-8;

/// Groups squared singular values of M_F into eigenbundle blocks, ascending m^2.
/// Singular values within group_tol * sigma_max of each other share a block;
/// the m^2 = 0 block may have unequal left/right dimensions.
inline std::vector<EigenBlock> eigenbundle_decomposition(const MassData& md, double group_tol = kDefaultGroupTol) {
  const int nl = md.n_l, nr = md.n_r;
  std::vector<EigenBlock> blocks;
  if (nl == 0 && nr == 0) return blocks;
  Eigen::JacobiSVD<Mat> svd(md.M_F, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const RVec s = svd.singularValues();
  const double smax = s.size() ? s(0) : 0.0;
  int rank = 0;
  while (rank < s.size() && smax > 0.0 && s(rank) > group_tol * smax) ++rank;

  // nonzero groups, s is descending
  std::vector<EigenBlock> massive;
  for (int i = 0; i < rank;) {
    int j = i + 1;
    while (j < rank && s(i) - s(j) <= group_tol * smax) ++j;
    EigenBlock b;
    double acc = 0.0;
    for (int k = i; k < j; ++k) acc += s(k) * s(k);
    b.m2 = acc / (j - i);
    b.left = svd.matrixU().middleCols(i, j - i);
    b.right = svd.matrixV().middleCols(i, j - i);
    massive.push_back(std::move(b));
    i = j;
  }
  if (nl - rank > 0 || nr - rank > 0) {
    EigenBlock zero;
    zero.m2 = 0.0;
    zero.left = nl ? Mat(svd.matrixU().rightCols(nl - rank)) : Mat(0, 0);
    zero.right = nr ? Mat(svd.matrixV().rightCols(nr - rank)) : Mat(0, 0);
    blocks.push_back(std::move(zero));
  }
  for (auto it = massive.rbegin(); it != massive.rend(); ++it) blocks.push_back(std::move(*it));
  return blocks;
}

/// Builds MassData from an assembled G_Y(z0); throws BlockStructureViolation if the
/// matrix is not odd with respect to the L/R grading, or not anti-Hermitian.
inline MassData mass_data_from_matrix(const Mat& d, int n_l, int n_r, double block_tol = 1e-12,
                                      double group_tol = kDefaultGroupTol) {
  if (d.rows() != n_l + n_r || d.cols() != n_l + n_r)
    throw DimensionMismatch("mass matrix has shape " + std::to_string(d.rows()) + "x" + std::to_string(d.cols()) +
                            ", expected N_F = " + std::to_string(n_l + n_r));
  const double scale = std::max(1.0, max_abs(d));
  const double diag = std::max(max_abs(Mat(d.topLeftCorner(n_l, n_l))), max_abs(Mat(d.bottomRightCorner(n_r, n_r))));
  if (diag > block_tol * scale)
    throw BlockStructureViolation("G_Y(z0) has nonzero diagonal L/L or R/R blocks (max " + std::to_string(diag) +
                                  "); the Yukawa map is not odd");
  if (anti_hermiticity_defect(d) > block_tol * scale)
    throw BlockStructureViolation("G_Y(z0) is not anti-Hermitian");
  MassData md;
  md.n_l = n_l;
  md.n_r = n_r;
  md.D = d;
  md.M_F = -kI * d.topRightCorner(n_l, n_r);

  const RVec s = md.M_F.size() ? RVec(md.M_F.jacobiSvd().singularValues()) : RVec(0);
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    md.spectrum_sq.push_back(s(i) * s(i));
    md.spectrum_sq.push_back(s(i) * s(i));
  }
  for (int k = 0; k < std::abs(n_l - n_r); ++k) md.spectrum_sq.push_back(0.0);
  std::sort(md.spectrum_sq.begin(), md.spectrum_sq.end());
  md.eigenspaces = eigenbundle_decomposition(md, group_tol);
  return md;
}

inline MassData mass_matrix(const YukawaMap& y, const VacuumSolution& vac, double block_tol = 1e-12,
                            double group_tol = kDefaultGroupTol) {
  return mass_data_from_matrix(apply_yukawa(y, vac.z0), y.n_l, y.n_r, block_tol, group_tol);
}

inline MassData mass_matrix_at(const YukawaMap& y, const Vec& z, double block_tol = 1e-12,
                               double group_tol = kDefaultGroupTol) {
  return mass_data_from_matrix(apply_yukawa(y, z), y.n_l, y.n_r, block_tol, group_tol);
}

/// |sum_blocks m^2 (P_L (+) P_R) - m_F^2|
inline double reconstruction_residual(const MassData& md) {
  Mat r = Mat::Zero(md.n_f(), md.n_f());
  for (const auto& b : md.eigenspaces) {
    if (b.left.cols()) r.topLeftCorner(md.n_l, md.n_l) += b.m2 * b.left * b.left.adjoint();
    if (b.right.cols()) r.bottomRightCorner(md.n_r, md.n_r) += b.m2 * b.right * b.right.adjoint();
  }
  return max_abs(Mat(r - md.mass_squared()));
}

/// Total dimension covered by the blocks; equals N_F for a complete decomposition.
inline int decomposition_dim(const MassData& md) {
  int d = 0;
  for (const auto& b : md.eigenspaces) d += static_cast<int>(b.left.cols() + b.right.cols());
  return d;
}

/// (1/N_F) sum over the full-fiber spectrum of m_F^2.
inline double mean_mass(const MassData& md) {
  if (md.spectrum_sq.empty()) return 0.0;
  double s = 0.0;
  for (double m2 : md.spectrum_sq) s += m2;
  return s / static_cast<double>(md.spectrum_sq.size());
}

struct LemmaOptions {
  int orbit_samples = 20;
  std::uint64_t seed = 20021204;
  double commutant_tol = 1e-12;
  double orbit_tol = 1e-9;
  double reconstruction_tol = 1e-10;
};

/// Outcome of checking the three clauses: commutant containment, orbit invariance
/// of the spectrum, and the eigenbundle (Whitney sum) decomposition.
struct LemmaReport {
  double commutant_residual = 0.0;
  double orbit_spectrum_residual = 0.0;     // multiset comparison, max relative
  double orbit_intertwining_residual = 0.0; // |G_Y(U_H z0) - U_F G_Y(z0) U_F^dagger|
  double reconstruction_residual = 0.0;
  int decomposition_dim = 0;
  int n_f = 0;
  LemmaOptions options;

  bool commutant_ok() const { return commutant_residual <= options.commutant_tol; }
  bool orbit_ok() const {
    return orbit_spectrum_residual <= options.orbit_tol && orbit_intertwining_residual <= options.orbit_tol;
  }
  bool decomposition_ok() const {
    return reconstruction_residual <= options.reconstruction_tol && decomposition_dim == n_f;
  }
  bool passed() const { return commutant_ok() && orbit_ok() && decomposition_ok(); }

  std::string failure_message() const {
    std::string msg;
    auto add = [&msg](const std::string& s) { msg += (msg.empty() ? "" : "; ") + s; };
    if (!commutant_ok())
      add("commutant: mass matrix does not commute with the isotropy algebra (residual " +
          std::to_string(commutant_residual) + ")");
    if (orbit_spectrum_residual > options.orbit_tol)
      add("orbit invariance: spectra differ between points of the vacuum orbit (residual " +
          std::to_string(orbit_spectrum_residual) + ")");
    if (orbit_intertwining_residual > options.orbit_tol)
      add("orbit invariance: G_Y does not intertwine the Higgs and fermion actions along the orbit (residual " +
          std::to_string(orbit_intertwining_residual) + "); Yukawa map is not G-equivariant");
    if (!decomposition_ok())
      add("eigenbundle decomposition incomplete (reconstruction residual " + std::to_string(reconstruction_residual) +
          ", covered dim " + std::to_string(decomposition_dim) + " of " + std::to_string(n_f) + ")");
    return msg;
  }

  void enforce() const {
    if (!passed()) throw LemmaViolation(failure_message());
  }
};

inline LemmaReport lemma_verify(const YukawaMap& y, const MassData& md, const VacuumSolution& vac,
                                const ChiralFermionRep& f, const HiggsModel& model, const LemmaOptions& opt = {}) {
  LemmaReport rep;
  rep.options = opt;
  rep.n_f = md.n_f();

  std::vector<Mat> unbroken;
  for (int k = 0; k < vac.isotropy.dim; ++k) unbroken.push_back(f.total.element(vac.isotropy.element(k)));
  rep.commutant_residual = commutant_check(unbroken, md.D);

  std::mt19937_64 rng(opt.seed);
  std::uniform_real_distribution<double> angle(-std::numbers::pi, std::numbers::pi);
  const int m = model.rep.dim_g();
  for (int s = 0; s < opt.orbit_samples; ++s) {
    RVec c(m);
    for (int i = 0; i < m; ++i) c(i) = angle(rng);
    const Vec z1 = exp_map(model.rep, c) * vac.z0;
    const Mat d1 = apply_yukawa(y, z1);
    const Mat uf = exp_map(f.total, c);
    rep.orbit_intertwining_residual =
        std::max(rep.orbit_intertwining_residual, max_abs(Mat(d1 - uf * md.D * uf.adjoint())));
    const auto md1 = mass_data_from_matrix(d1, md.n_l, md.n_r, 1e-10);
    rep.orbit_spectrum_residual = std::max(rep.orbit_spectrum_residual, max_rel_diff(md1.spectrum_sq, md.spectrum_sq));
  }

  rep.reconstruction_residual = reconstruction_residual(md);
  rep.decomposition_dim = decomposition_dim(md);
  return rep;
}

}  // namespace fermass
