#pragma once

#include <vector>

#include "linalg.hpp"

namespace fermass {

enum class Signature { euclidean, lorentzian };

inline const char* to_string(Signature s) {
  return s == Signature::euclidean ? "euclidean" : "lorentzian";
}

/// Gamma matrices of the Clifford algebra of R^{2n} (euclidean) or R^{1,2n-1}
/// (lorentzian, metric diag(+1,-1,...,-1)) on the spinor module C^{2^n}.
///
/// Conventions: euclidean gammas are Hermitian; lorentzian gamma_0 is Hermitian
/// and the spatial gammas are anti-Hermitian. gamma5 = (-i)^n gamma_1...gamma_2n
/// (euclidean product) is Hermitian and squares to Id in both signatures.
struct CliffordAlgebra {
  int n = 0;
  Signature signature = Signature::euclidean;
  std::vector<Mat> gamma;  // lower index, a = 0..2n-1
  Mat gamma5;
  double xi_scale = 0.0;

  int dim() const { return 2 * n; }
  int spinor_dim() const { return static_cast<int>(gamma5.rows()); }
  double metric(int a) const {
    return (signature == Signature::lorentzian && a > 0) ? -1.0 : 1.0;
  }
  /// gamma^a = g^{ab} gamma_b (the metric is diagonal and self-inverse).
  Mat gamma_upper(int a) const { return metric(a) * gamma[a]; }
};

namespace detail {

inline Mat pauli(int k) {
  Mat s(2, 2);
  switch (k) {
    case 1: s << 0, 1, 1, 0; break;
    case 2: s << 0, -kI, kI, 0; break;
    case 3: s << 1, 0, 0, -1; break;
    default: s = Mat::Identity(2, 2);
  }
  return s;
}

inline std::vector<Mat> euclidean_gammas(int n) {
  std::vector<Mat> g{pauli(1), pauli(2)};
  for (int k = 1; k < n; ++k) {
    const auto d = g.front().rows();
    std::vector<Mat> next;
    next.reserve(g.size() + 2);
    for (const auto& m : g) next.push_back(kron(m, pauli(3)));
    next.push_back(kron(Mat::Identity(d, d), pauli(1)));
    next.push_back(kron(Mat::Identity(d, d), pauli(2)));
    g = std::move(next);
  }
  return g;
}

}  // namespace detail

inline CliffordAlgebra build_clifford(int n, Signature signature = Signature::euclidean) {
  if (n < 1) throw std::invalid_argument("build_clifford: n must be >= 1");
  CliffordAlgebra cl;
  cl.n = n;
  cl.signature = signature;
  auto ge = detail::euclidean_gammas(n);

  Mat prod = Mat::Identity(ge[0].rows(), ge[0].cols());
  for (const auto& g : ge) prod = prod * g;
  cplx phase = 1.0;
  for (int k = 0; k < n; ++k) phase *= -kI;
  cl.gamma5 = phase * prod;

  if (signature == Signature::lorentzian)
    for (std::size_t a = 1; a < ge.size(); ++a) ge[a] *= kI;
  cl.gamma = std::move(ge);
  cl.xi_scale = 1.0 / (2.0 * n);
  return cl;
}

/// (sum_a covector_a gamma^a) * spinor_block.
inline Mat clifford_action(const CliffordAlgebra& cl, const RVec& covector, const Mat& spinor_block) {
  if (covector.size() != cl.dim())
    throw DimensionMismatch("clifford_action: covector has length " + std::to_string(covector.size()) +
                            ", expected " + std::to_string(cl.dim()));
  if (spinor_block.rows() != cl.spinor_dim())
    throw DimensionMismatch("clifford_action: spinor block has wrong row count");
  Mat c = Mat::Zero(cl.spinor_dim(), cl.spinor_dim());
  for (int a = 0; a < cl.dim(); ++a) c += covector(a) * cl.gamma_upper(a);
  return c * spinor_block;
}

/// Canonical one-form components xi_a = xi_scale * gamma_a; sum_a gamma^a xi_a = Id.
inline std::vector<Mat> canonical_xi(const CliffordAlgebra& cl) {
  std::vector<Mat> xi;
  xi.reserve(cl.gamma.size());
  for (const auto& g : cl.gamma) xi.push_back(cl.xi_scale * g);
  return xi;
}

/// Identity residuals of a Clifford algebra, all expected to be ~0.
struct CliffordResiduals {
  double anticommutator = 0.0;  // max |{g_a,g_b} - 2 g_ab Id|
  double gamma5_square = 0.0;
  double gamma5_anticommute = 0.0;
  double traces = 0.0;
  double right_inverse = 0.0;  // |sum gamma^a xi_a - Id|
  double hermiticity = 0.0;    // per-signature convention

  double max() const {
    return std::max({anticommutator, gamma5_square, gamma5_anticommute, traces, right_inverse, hermiticity});
  }
};

inline CliffordResiduals clifford_residuals(const CliffordAlgebra& cl) {
  CliffordResiduals r;
  const auto d = cl.spinor_dim();
  const Mat id = Mat::Identity(d, d);
  for (int a = 0; a < cl.dim(); ++a) {
    for (int b = 0; b < cl.dim(); ++b) {
      const double gab = a == b ? cl.metric(a) : 0.0;
      Mat ac = cl.gamma[a] * cl.gamma[b] + cl.gamma[b] * cl.gamma[a] - 2.0 * gab * id;
      r.anticommutator = std::max(r.anticommutator, max_abs(ac));
    }
    r.gamma5_anticommute =
        std::max(r.gamma5_anticommute, max_abs(Mat(cl.gamma5 * cl.gamma[a] + cl.gamma[a] * cl.gamma5)));
    r.traces = std::max(r.traces, std::abs(cl.gamma[a].trace()));
    const bool hermitian = cl.signature == Signature::euclidean || a == 0;
    r.hermiticity = std::max(r.hermiticity, hermitian ? hermiticity_defect(cl.gamma[a])
                                                      : anti_hermiticity_defect(cl.gamma[a]));
  }
  r.gamma5_square = max_abs(Mat(cl.gamma5 * cl.gamma5 - id));
  r.traces = std::max(r.traces, std::abs(cl.gamma5.trace()));
  r.hermiticity = std::max(r.hermiticity, hermiticity_defect(cl.gamma5));
  const auto xi = canonical_xi(cl);
  Mat s = Mat::Zero(d, d);
  for (int a = 0; a < cl.dim(); ++a) s += cl.gamma_upper(a) * xi[a];
  r.right_inverse = max_abs(Mat(s - id));
  return r;
}

}  // namespace fermass
