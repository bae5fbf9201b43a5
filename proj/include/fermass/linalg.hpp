#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "errors.hpp"

namespace fermass {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using RMat = Eigen::MatrixXd;
using RVec = Eigen::VectorXd;

inline constexpr cplx kI{0.0, 1.0};

/// Largest entry modulus; zero for empty matrices.
template <typename Derived>
double max_abs(const Eigen::MatrixBase<Derived>& m) {
  if (m.size() == 0) return 0.0;
  return m.cwiseAbs().maxCoeff();
}

/// C^N -> R^{2N}, interleaved (Re z1, Im z1, Re z2, ...).
inline RVec realify(const Vec& z) {
  RVec x(2 * z.size());
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    x(2 * i) = z(i).real();
    x(2 * i + 1) = z(i).imag();
  }
  return x;
}

inline Vec complexify(const RVec& x) {
  if (x.size() % 2 != 0) throw DimensionMismatch("complexify: odd-length real vector");
  Vec z(x.size() / 2);
  for (Eigen::Index i = 0; i < z.size(); ++i) z(i) = cplx(x(2 * i), x(2 * i + 1));
  return z;
}

inline Mat commutator(const Mat& a, const Mat& b) { return a * b - b * a; }

inline Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

inline double hermiticity_defect(const Mat& m) { return max_abs(Mat(m - m.adjoint())); }
inline double anti_hermiticity_defect(const Mat& m) { return max_abs(Mat(m + m.adjoint())); }

inline double unitarity_defect(const Mat& u) {
  return max_abs(Mat(u.adjoint() * u - Mat::Identity(u.cols(), u.cols())));
}

/// Flip column signs so the largest-magnitude entry of every column is positive.
inline void canonicalize_signs(RMat& basis) {
  for (Eigen::Index c = 0; c < basis.cols(); ++c) {
    Eigen::Index arg = 0;
    double best = -1.0;
    for (Eigen::Index r = 0; r < basis.rows(); ++r) {
      // ties resolved toward the first index; 1e-12 slack keeps it stable under roundoff
      if (std::abs(basis(r, c)) > best + 1e-12) {
        best = std::abs(basis(r, c));
        arg = r;
      }
    }
    if (basis(arg, c) < 0) basis.col(c) *= -1.0;
  }
}

/// Column-space / null-space split of a real matrix by SVD.
/// Singular values below rel_cut * sigma_max count as zero.
struct RealSubspaces {
  RMat range;  // orthonormal basis of col(A)
  RMat range_complement;
  RMat null;  // orthonormal basis of ker(A)
  int rank = 0;
};

inline RealSubspaces real_subspaces(const RMat& a, double rel_cut) {
  RealSubspaces out;
  const auto rows = a.rows();
  const auto cols = a.cols();
  if (cols == 0 || rows == 0) {
    out.range = RMat(rows, 0);
    out.range_complement = RMat::Identity(rows, rows);
    out.null = RMat::Identity(cols, cols);
    return out;
  }
  Eigen::JacobiSVD<RMat> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const RVec& s = svd.singularValues();
  const double smax = s.size() ? s(0) : 0.0;
  int rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (smax > 0.0 && s(i) > rel_cut * smax) ++rank;
  out.rank = rank;
  out.range = svd.matrixU().leftCols(rank);
  out.range_complement = svd.matrixU().rightCols(rows - rank);
  out.null = svd.matrixV().rightCols(cols - rank);
  canonicalize_signs(out.range);
  canonicalize_signs(out.range_complement);
  canonicalize_signs(out.null);
  return out;
}

inline std::vector<double> sorted(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  return v;
}

/// max_i |a_i - b_i| / max(1, |b_i|) over two equally sized sorted lists; +inf on size mismatch.
inline double max_rel_diff(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    worst = std::max(worst, std::abs(a[i] - b[i]) / std::max(1.0, std::abs(b[i])));
  return worst;
}

}  // namespace fermass
