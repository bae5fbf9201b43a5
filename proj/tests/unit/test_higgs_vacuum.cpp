#include <gtest/gtest.h>

#include "fermass/registry.hpp"

using namespace fermass;

namespace {

HiggsModel ew_higgs() { return mexican_hat(registry::ew_doublet(1.0, "higgs"), 1.0, 2.0); }

Vec pair(cplx a, cplx b) {
  Vec z(2);
  z << a, b;
  return z;
}

// Central finite differences of potential_eval in the realified coordinates.
RVec fd_gradient(const HiggsModel& m, const Vec& z, double h = 1e-6) {
  RVec x = realify(z), g(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    RVec p = x, q = x;
    p(i) += h;
    q(i) -= h;
    g(i) = (potential_eval(m, complexify(p)) - potential_eval(m, complexify(q))) / (2 * h);
  }
  return g;
}

RMat fd_hessian(const HiggsModel& m, const Vec& z, double h = 1e-5) {
  RVec x = realify(z);
  RMat hm(x.size(), x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    RVec p = x, q = x;
    p(i) += h;
    q(i) -= h;
    hm.col(i) = (gradient(m, complexify(p)) - gradient(m, complexify(q))) / (2 * h);
  }
  return hm;
}

}  // namespace

TEST(HiggsVacuum, PotentialClosedForm) {
  const auto m = ew_higgs();
  EXPECT_DOUBLE_EQ(potential_eval(m, Vec::Zero(2)), 16.0);
  EXPECT_DOUBLE_EQ(potential_eval(m, pair(0, 2)), 0.0);
  EXPECT_DOUBLE_EQ(potential_eval(m, pair(cplx(1, 1), 1)), 1.0);  // (3 - 4)^2
  EXPECT_THROW(potential_eval(m, Vec::Zero(3)), DimensionMismatch);
}

TEST(HiggsVacuum, GradientAndHessianMatchFiniteDifferences) {
  const auto m = ew_higgs();
  const auto c = custom_polynomial(registry::ew_doublet(1.0, "h"), {1.0, -3.0, 0.5, 0.25});
  for (const Vec& z : {pair(cplx(0.3, -0.2), cplx(1.1, 0.4)), pair(0, 2), pair(cplx(-1, 0.5), 0)}) {
    for (const auto* model : {&m, &c}) {
      const RVec g = gradient(*model, z);
      EXPECT_LE((g - fd_gradient(*model, z)).cwiseAbs().maxCoeff(), 1e-6 * std::max(1.0, g.norm()));
      const RMat h = hessian(*model, z);
      EXPECT_LE((h - fd_hessian(*model, z)).cwiseAbs().maxCoeff(), 1e-5 * std::max(1.0, h.norm()));
    }
  }
}

TEST(HiggsVacuum, PotentialIsGroupInvariant) {
  const auto m = ew_higgs();
  RVec c(4);
  c << 0.4, -1.3, 2.2, 0.9;
  const Vec z = pair(cplx(0.5, 0.1), cplx(-0.7, 1.2));
  EXPECT_NEAR(potential_eval(m, exp_map(m.rep, c) * z), potential_eval(m, z), 1e-12);
}

TEST(HiggsVacuum, ValidatePotential) {
  EXPECT_THROW(validate_potential(mexican_hat(registry::ew_doublet(1, "h"), -1.0, 2.0)), InvariantViolation);
  EXPECT_THROW(validate_potential(mexican_hat(registry::ew_doublet(1, "h"), 1.0, 0.0)), InvariantViolation);
  EXPECT_THROW(validate_potential(custom_polynomial(registry::ew_doublet(1, "h"), {0.0, 1.0, -1.0})),
               InvariantViolation);
  EXPECT_NO_THROW(validate_potential(custom_polynomial(registry::ew_doublet(1, "h"), {2.0, -1.0, 1.0, 0.0})));
}

TEST(HiggsVacuum, ElectroweakMinimum) {
  const auto m = ew_higgs();
  const auto vac = minimize(m, pair(0, 0.3));
  EXPECT_NEAR(vac.z0.norm(), 2.0, 1e-8);
  EXPECT_LE(vac.gradient_norm, 1e-8 * 2.0);
  EXPECT_NEAR(vac.value, 0.0, 1e-14);
  EXPECT_EQ(vac.isotropy.dim, 1);
  EXPECT_EQ(vac.goldstone_basis.cols(), 3);
  EXPECT_EQ(vac.physical_basis.cols(), 1);
  ASSERT_EQ(vac.transversal_hessian_eigs.size(), 1u);
  EXPECT_NEAR(vac.transversal_hessian_eigs[0], 32.0, 32.0 * 1e-6);  // 8 lambda v^2
  // seed lies on the real ray through the lower slot, descent keeps it there
  EXPECT_NEAR(std::abs(vac.z0(0)), 0.0, 1e-12);
  EXPECT_NEAR(vac.z0(1).real(), 2.0, 1e-8);
}

TEST(HiggsVacuum, GoldstoneAndPhysicalSplit) {
  const auto m = ew_higgs();
  const auto vac = minimize(m, pair(cplx(0.1, -0.2), cplx(0.3, 0.05)));
  const RMat h = hessian(m, vac.z0);
  EXPECT_LE((vac.goldstone_basis.transpose() * h * vac.goldstone_basis).cwiseAbs().maxCoeff(), 1e-7);
  EXPECT_LE((vac.goldstone_basis.transpose() * vac.physical_basis).cwiseAbs().maxCoeff(), 1e-12);
  // physical direction is radial
  const RVec radial = realify(vac.z0).normalized();
  EXPECT_NEAR(std::abs(radial.dot(vac.physical_basis.col(0))), 1.0, 1e-10);
  const auto iso = isotropy_algebra(m.rep, vac.z0);
  EXPECT_EQ(vac.goldstone_basis.cols() + iso.dim, m.rep.dim_g());
}

TEST(HiggsVacuum, U1PhaseGoldstoneCount) {
  const auto c = registry::u1_phase();
  const auto vac = minimize(c.higgs_model(), c.seed);
  EXPECT_NEAR(vac.z0.norm(), 1.0, 1e-8);
  EXPECT_EQ(vac.isotropy.dim, 0);
  EXPECT_EQ(vac.goldstone_basis.cols(), 1);
  EXPECT_EQ(vac.physical_basis.cols(), 1);
}

TEST(HiggsVacuum, UnitaryGaugeProjectionRemovesGoldstones) {
  const auto m = ew_higgs();
  const auto vac = minimize(m, pair(0, 0.3));
  const GoldstoneSplit split{vac.goldstone_basis, vac.physical_basis};
  const Vec phi = pair(cplx(0.3, 0.2), cplx(-0.4, 0.7));
  const Vec p = unitary_gauge_project(split, phi);
  EXPECT_LE((vac.goldstone_basis.transpose() * realify(p)).cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_LE((unitary_gauge_project(split, p) - p).cwiseAbs().maxCoeff(), 1e-14);
  // only the real part of the lower slot survives
  EXPECT_NEAR(std::abs(p(1) - cplx(-0.4, 0)), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(p(0)), 0.0, 1e-12);
}

TEST(HiggsVacuum, SymmetricSeedIsASaddle) {
  EXPECT_THROW(minimize(ew_higgs(), Vec::Zero(2)), SaddleConverged);
}

TEST(HiggsVacuum, FlatDirectionIsDegenerate) {
  // p(s) = (s - 1)^4: critical at |z| = 1 with vanishing radial curvature
  const auto m = custom_polynomial(registry::ew_doublet(1.0, "h"), {1.0, -4.0, 6.0, -4.0, 1.0});
  EXPECT_THROW(classify_critical_point(m, pair(0, 1.0)), DegenerateVacuum);
}

TEST(HiggsVacuum, NonConvergenceWithTinyBudget) {
  MinimizeOptions opt;
  opt.max_descent_iters = 1;
  opt.max_newton_iters = 0;
  EXPECT_THROW(minimize(ew_higgs(), pair(0, 0.3), opt), NonConvergence);
}

TEST(HiggsVacuum, CustomPolynomialMinimum) {
  // p(s) = (s - 2)^2 = 4 - 4 s + s^2, minimum |z|^2 = 2
  const auto m = custom_polynomial(registry::ew_doublet(1.0, "h"), {4.0, -4.0, 1.0});
  const auto vac = minimize(m, pair(cplx(0.2, 0.1), 0.4));
  EXPECT_NEAR(vac.z0.squaredNorm(), 2.0, 1e-8);
  EXPECT_EQ(vac.isotropy.dim, 1);
}
