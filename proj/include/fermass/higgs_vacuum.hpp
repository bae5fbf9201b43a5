#pragma once

#include <array>
#include <string>
#include <vector>

#include "group_rep.hpp"

namespace fermass {

enum class PotentialKind { mexican_hat, custom_polynomial };

/// G-invariant Higgs potential V(z) = p(|z|^2).
///
/// mexican_hat stores (lambda, v) and means p(s) = lambda (s - v^2)^2;
/// custom_polynomial stores coefficients c_k of p(s) = sum_k c_k s^k.
struct HiggsModel {
  LieAlgebraRep rep;
  PotentialKind kind = PotentialKind::mexican_hat;
  double lambda = 1.0;
  double v = 1.0;
  std::vector<double> coefficients;

  /// Coefficients of p in the monomial basis, whatever the kind.
  std::vector<double> polynomial() const {
    if (kind == PotentialKind::mexican_hat) {
      const double v2 = v * v;
      return {lambda * v2 * v2, -2.0 * lambda * v2, lambda};
    }
    return coefficients;
  }
};

inline HiggsModel mexican_hat(LieAlgebraRep rep, double lambda, double v) {
  HiggsModel m;
  m.rep = std::move(rep);
  m.kind = PotentialKind::mexican_hat;
  m.lambda = lambda;
  m.v = v;
  return m;
}

inline HiggsModel custom_polynomial(LieAlgebraRep rep, std::vector<double> coefficients) {
  HiggsModel m;
  m.rep = std::move(rep);
  m.kind = PotentialKind::custom_polynomial;
  m.coefficients = std::move(coefficients);
  return m;
}

/// Bounded below on s = |z|^2 >= 0 iff the leading nonzero coefficient is positive
/// (or p is constant).
inline void validate_potential(const HiggsModel& m) {
  if (m.kind == PotentialKind::mexican_hat) {
    if (!(m.lambda > 0.0)) throw InvariantViolation("mexican_hat: lambda must be positive");
    if (!(m.v > 0.0)) throw InvariantViolation("mexican_hat: v must be positive");
    return;
  }
  const auto& c = m.coefficients;
  for (auto it = c.rbegin(); it != c.rend(); ++it) {
    if (*it == 0.0) continue;
    if (it == c.rend() - 1) return;
    if (*it < 0.0) throw InvariantViolation("custom_polynomial: leading coefficient is negative, potential unbounded below");
    return;
  }
}

namespace detail {

/// p(s), p'(s), p''(s)
inline std::array<double, 3> poly_eval(const std::vector<double>& c, double s) {
  double p = 0, dp = 0, ddp = 0;
  for (std::size_t k = c.size(); k-- > 0;) {
    ddp = ddp * s + 2.0 * dp;
    dp = dp * s + p;
    p = p * s + c[k];
  }
  return {p, dp, ddp};
}

}  // namespace detail

inline double potential_eval(const HiggsModel& m, const Vec& z) {
  if (z.size() != m.rep.rep_dim()) throw DimensionMismatch("potential_eval: vector length mismatch");
  return detail::poly_eval(m.polynomial(), z.squaredNorm())[0];
}

/// Gradient with respect to realify(z): 2 p'(s) x.
inline RVec gradient(const HiggsModel& m, const Vec& z) {
  if (z.size() != m.rep.rep_dim()) throw DimensionMismatch("gradient: vector length mismatch");
  const RVec x = realify(z);
  return 2.0 * detail::poly_eval(m.polynomial(), x.squaredNorm())[1] * x;
}

/// Hessian with respect to realify(z): 2 p'(s) Id + 4 p''(s) x x^T.
inline RMat hessian(const HiggsModel& m, const Vec& z) {
  if (z.size() != m.rep.rep_dim()) throw DimensionMismatch("hessian: vector length mismatch");
  const RVec x = realify(z);
  const auto p = detail::poly_eval(m.polynomial(), x.squaredNorm());
  return 2.0 * p[1] * RMat::Identity(x.size(), x.size()) + 4.0 * p[2] * x * x.transpose();
}

/// Orthonormal real bases of the orbit tangent (Goldstone) directions and
/// their orthogonal complement (physical directions) at z0.
struct GoldstoneSplit {
  RMat goldstone;
  RMat physical;
};

inline GoldstoneSplit goldstone_split(const LieAlgebraRep& rep, const Vec& z0, double rank_cut = kDefaultRankCut) {
  const auto sub = real_subspaces(orbit_tangent_matrix(rep, z0), rank_cut);
  return {sub.range, sub.range_complement};
}

/// Orthogonal projection of realify(phi) onto the physical directions.
inline Vec unitary_gauge_project(const GoldstoneSplit& split, const Vec& phi) {
  if (2 * phi.size() != split.physical.rows()) throw DimensionMismatch("unitary_gauge_project: vector length mismatch");
  const RVec x = realify(phi);
  return complexify(split.physical * (split.physical.transpose() * x));
}

struct VacuumSolution {
  Vec z0;
  double value = 0.0;
  IsotropyResult isotropy;
  RMat goldstone_basis;
  RMat physical_basis;
  std::vector<double> transversal_hessian_eigs;
  double gradient_norm = 0.0;
  int iterations = 0;
};

struct MinimizeOptions {
  double grad_tol = 1e-8;
  double polish_switch = 1e-5;  // gradient norm at which Newton polishing takes over
  int max_descent_iters = 100000;
  int max_newton_iters = 100;
  double rank_cut = kDefaultRankCut;
  double hessian_tol = 1e-9;  // relative to the Hessian's scale
};

/// Attaches isotropy, Goldstone split and transversal Hessian to a critical point.
/// Throws SaddleConverged / DegenerateVacuum when the point is not a strict minimum
/// transversally to its orbit.
inline VacuumSolution classify_critical_point(const HiggsModel& m, const Vec& z0, const MinimizeOptions& opt = {}) {
  VacuumSolution sol;
  sol.z0 = z0;
  sol.value = potential_eval(m, z0);
  sol.gradient_norm = gradient(m, z0).norm();
  sol.isotropy = isotropy_algebra(m.rep, z0, opt.rank_cut);
  auto split = goldstone_split(m.rep, z0, opt.rank_cut);
  sol.goldstone_basis = std::move(split.goldstone);
  sol.physical_basis = std::move(split.physical);
  const RMat h = hessian(m, z0);
  const RMat ht = sol.physical_basis.transpose() * h * sol.physical_basis;
  if (ht.size() > 0) {
    Eigen::SelfAdjointEigenSolver<RMat> es(ht, Eigen::EigenvaluesOnly);
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) sol.transversal_hessian_eigs.push_back(es.eigenvalues()(i));
  }
  const double scale = std::max(1.0, h.cwiseAbs().maxCoeff());
  for (double e : sol.transversal_hessian_eigs) {
    if (e < -opt.hessian_tol * scale)
      throw SaddleConverged("critical point at |z| = " + std::to_string(z0.norm()) +
                            " has negative transversal Hessian eigenvalue " + std::to_string(e));
    if (e <= opt.hessian_tol * scale)
      throw DegenerateVacuum("critical point at |z| = " + std::to_string(z0.norm()) +
                             " has a vanishing transversal Hessian eigenvalue");
  }
  return sol;
}

/// Gradient descent with Armijo backtracking and a radius-relative step cap, then Newton steps restricted to
/// the physical directions (the full Hessian is singular along the orbit).
inline VacuumSolution minimize(const HiggsModel& m, const Vec& seed, const MinimizeOptions& opt = {}) {
  validate_potential(m);
  if (seed.size() != m.rep.rep_dim()) throw DimensionMismatch("minimize: seed length mismatch");
  RVec x = realify(seed);
  auto value = [&](const RVec& y) { return potential_eval(m, complexify(y)); };
  auto grad = [&](const RVec& y) { return gradient(m, complexify(y)); };

  int iters = 0;
  RVec g = grad(x);
  double alpha = 1.0;
  while (g.norm() > opt.polish_switch && iters < opt.max_descent_iters) {
    const double f0 = value(x);
    const double g2 = g.squaredNorm();
    // cap the step at half the current radius so the iterate follows the gradient
    // flow from the seed instead of jumping across the origin onto another ray
    const double cap = 0.5 * std::max(x.norm(), 1e-3) / std::sqrt(g2);
    alpha = std::min({1.0, 4.0 * alpha, cap});
    while (value(x - alpha * g) > f0 - 1e-4 * alpha * g2 && alpha > 1e-300) alpha *= 0.5;
    x -= alpha * g;
    g = grad(x);
    ++iters;
  }

  for (int k = 0; k < opt.max_newton_iters && g.norm() > 1e-3 * opt.grad_tol; ++k, ++iters) {
    const Vec z = complexify(x);
    const RMat p = goldstone_split(m.rep, z, opt.rank_cut).physical;
    const RMat hp = p.transpose() * hessian(m, z) * p;
    Eigen::LLT<RMat> llt(hp);
    RVec step;
    if (hp.size() > 0 && llt.info() == Eigen::Success) {
      step = -p * llt.solve(p.transpose() * g);
    } else {
      step = -1e-2 * g;  // not locally convex: keep descending
    }
    const double f0 = value(x);
    double t = 1.0;
    while (value(x + t * step) > f0 + 1e-12 * std::max(1.0, std::abs(f0)) && t > 1e-8) t *= 0.5;
    x += t * step;
    g = grad(x);
  }

  const double scale = std::max(1.0, x.norm());
  if (g.norm() > opt.grad_tol * scale)
    throw NonConvergence("minimize: gradient norm " + std::to_string(g.norm()) + " after " +
                         std::to_string(iters) + " iterations");
  auto sol = classify_critical_point(m, complexify(x), opt);
  sol.iterations = iters;
  return sol;
}

}  // namespace fermass
