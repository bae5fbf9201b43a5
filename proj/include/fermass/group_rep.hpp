#pragma once

#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "linalg.hpp"

namespace fermass {

/// Unitary representation of a compact (reductive) Lie algebra, given by
/// anti-Hermitian generator matrices. Algebra elements are real combinations
/// sum_i c_i X_i of the generators.
struct LieAlgebraRep {
  std::vector<Mat> generators;
  std::string label;

  int dim_g() const { return static_cast<int>(generators.size()); }
  int rep_dim() const { return generators.empty() ? 0 : static_cast<int>(generators.front().rows()); }

  /// rho'(sum_i c_i X_i)
  Mat element(const RVec& coeffs) const {
    if (coeffs.size() != dim_g())
      throw DimensionMismatch(label + ": coefficient vector has length " + std::to_string(coeffs.size()) +
                              ", algebra dimension is " + std::to_string(dim_g()));
    Mat x = Mat::Zero(rep_dim(), rep_dim());
    for (int i = 0; i < dim_g(); ++i) x += coeffs(i) * generators[i];
    return x;
  }
};

/// Residual of projecting every commutator [X_i, X_j] onto the real span of
/// the generators (least squares in realified matrix space).
inline double closure_residual(const LieAlgebraRep& rep) {
  const int m = rep.dim_g();
  if (m == 0) return 0.0;
  const auto d = rep.rep_dim();
  auto flatten = [d](const Mat& x) {
    RVec v(2 * d * d);
    for (Eigen::Index i = 0; i < d * d; ++i) {
      v(2 * i) = x.data()[i].real();
      v(2 * i + 1) = x.data()[i].imag();
    }
    return v;
  };
  RMat basis(2 * d * d, m);
  for (int i = 0; i < m; ++i) basis.col(i) = flatten(rep.generators[i]);
  Eigen::CompleteOrthogonalDecomposition<RMat> cod(basis);
  double worst = 0.0;
  for (int i = 0; i < m; ++i) {
    for (int j = i + 1; j < m; ++j) {
      const RVec c = flatten(commutator(rep.generators[i], rep.generators[j]));
      const RVec fit = basis * cod.solve(c);
      worst = std::max(worst, (c - fit).cwiseAbs().maxCoeff());
    }
  }
  return worst;
}

/// Throws InvariantViolation naming the offending generator.
inline void validate_rep(const LieAlgebraRep& rep, double anti_herm_tol = 1e-12, double closure_tol = 1e-10) {
  for (int i = 0; i < rep.dim_g(); ++i) {
    const auto& x = rep.generators[i];
    if (x.rows() != x.cols() || x.rows() != rep.rep_dim())
      throw DimensionMismatch(rep.label + ": generator " + std::to_string(i) + " has inconsistent shape");
    const double defect = anti_hermiticity_defect(x);
    if (defect > anti_herm_tol)
      throw InvariantViolation(rep.label + ": generator " + std::to_string(i) +
                               " is not anti-Hermitian (|X + X^dagger| = " + std::to_string(defect) + ")");
  }
  const double cl = closure_residual(rep);
  if (cl > closure_tol)
    throw InvariantViolation(rep.label + ": generators do not close under commutation (residual " +
                             std::to_string(cl) + ")");
}

/// Block-diagonal sum of representations of the same algebra.
inline LieAlgebraRep direct_sum(const std::vector<LieAlgebraRep>& reps, std::string label = {}) {
  if (reps.empty()) throw DimensionMismatch("direct_sum: no representations");
  const int m = reps.front().dim_g();
  int total = 0;
  for (const auto& r : reps) {
    if (r.dim_g() != m)
      throw DimensionMismatch("direct_sum: mismatched algebra dimensions (" + std::to_string(m) + " vs " +
                              std::to_string(r.dim_g()) + ")");
    total += r.rep_dim();
  }
  LieAlgebraRep out;
  if (label.empty()) {
    for (std::size_t k = 0; k < reps.size(); ++k) label += (k ? "+" : "") + reps[k].label;
  }
  out.label = std::move(label);
  for (int i = 0; i < m; ++i) {
    Mat x = Mat::Zero(total, total);
    int off = 0;
    for (const auto& r : reps) {
      x.block(off, off, r.rep_dim(), r.rep_dim()) = r.generators[i];
      off += r.rep_dim();
    }
    out.generators.push_back(std::move(x));
  }
  return out;
}

inline Vec infinitesimal_action(const LieAlgebraRep& rep, const RVec& coeffs, const Vec& z) {
  if (z.size() != rep.rep_dim())
    throw DimensionMismatch(rep.label + ": vector has length " + std::to_string(z.size()) +
                            ", representation dimension is " + std::to_string(rep.rep_dim()));
  return rep.element(coeffs) * z;
}

/// 2N x dim_g real matrix whose columns are realify(X_i z).
inline RMat orbit_tangent_matrix(const LieAlgebraRep& rep, const Vec& z) {
  if (z.size() != rep.rep_dim()) throw DimensionMismatch(rep.label + ": vector length mismatch");
  RMat t(2 * rep.rep_dim(), rep.dim_g());
  for (int i = 0; i < rep.dim_g(); ++i) t.col(i) = realify(rep.generators[i] * z);
  return t;
}

struct IsotropyResult {
  RMat basis;  // dim_g x dim, orthonormal columns of generator coefficients
  int dim = 0;

  RVec element(int k) const { return basis.col(k); }
};

inline constexpr double kDefaultRankCut = 1e-9;

/// Real null space of c -> (sum c_i X_i) z0.
inline IsotropyResult isotropy_algebra(const LieAlgebraRep& rep, const Vec& z0, double rank_cut = kDefaultRankCut) {
  const auto sub = real_subspaces(orbit_tangent_matrix(rep, z0), rank_cut);
  IsotropyResult out;
  out.basis = sub.null;
  out.dim = static_cast<int>(sub.null.cols());
  return out;
}

/// max_i |[candidate, M_i]|; zero means candidate lies in the commutant.
inline double commutant_check(const std::vector<Mat>& matrices, const Mat& candidate) {
  double worst = 0.0;
  for (const auto& m : matrices) {
    if (m.rows() != candidate.rows() || m.cols() != candidate.cols() || m.rows() != m.cols())
      throw DimensionMismatch("commutant_check: size mismatch");
    worst = std::max(worst, max_abs(commutator(candidate, m)));
  }
  return worst;
}

/// exp(X) for anti-Hermitian X, via the eigendecomposition of the Hermitian i X.
inline Mat exp_anti_hermitian(const Mat& x) {
  if (x.size() == 0) return x;
  const Mat h = kI * x;
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (h + h.adjoint()));
  Vec phases(es.eigenvalues().size());
  for (Eigen::Index i = 0; i < phases.size(); ++i) phases(i) = std::exp(-kI * es.eigenvalues()(i));
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

inline Mat exp_map(const LieAlgebraRep& rep, const RVec& coeffs) { return exp_anti_hermitian(rep.element(coeffs)); }

}  // namespace fermass
