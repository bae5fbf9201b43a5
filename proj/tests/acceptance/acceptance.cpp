// One PASS/FAIL line per acceptance criterion. Exit status is nonzero if any
// criterion fails. Every expected value comes from an oracle written here.

#include <chrono>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>

#include "fermass/registry.hpp"
#include "fermass/report.hpp"

using namespace fermass;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail += (detail.empty() ? "" : "; ") + what;
    }
  }
};

struct Pipeline {
  ModelConfig c;
  HiggsModel model;
  ChiralFermionRep f;
  VacuumSolution vac;
  MassData md;
  CliffordAlgebra cl;

  explicit Pipeline(ModelConfig cfg) : c(std::move(cfg)), model(c.higgs_model()), f(c.fermions()) {
    vac = minimize(model, c.seed);
    md = mass_matrix(c.yukawa, vac);
    cl = build_clifford(c.lattice.n);
  }
  LatticeOperator dirac(const std::optional<WilsonLine>& wl = std::nullopt) const {
    return build_vacuum_dirac(c.lattice, cl, md, f, wl);
  }
};

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

/// Per internal state: electric charge and squared mass. Expanded over momenta
/// of the 2D torus with L sites per axis, two spinor components each.
struct State {
  double charge;
  double m2;
};

std::vector<double> momentum_oracle(int L, const std::vector<State>& states, const std::vector<double>& theta,
                                    double charge_norm) {
  std::vector<double> out;
  for (int m1 = 0; m1 < L; ++m1)
    for (int m2 = 0; m2 < L; ++m2)
      for (const auto& s : states) {
        double e = s.m2;
        int ax = 0;
        for (int m : {m1, m2}) {
          // A_a = theta_a Q/|Q| acts on charge q as -i q theta_a/|Q|
          const double kappa = 2.0 * std::numbers::pi * m / L - s.charge * theta[ax++] / charge_norm;
          e += kappa * kappa;
        }
        out.insert(out.end(), 2, e);
      }
  std::sort(out.begin(), out.end());
  return out;
}

double anticommutator_defect(const CliffordAlgebra& cl) {
  const auto d = cl.spinor_dim();
  double worst = 0.0;
  for (int a = 0; a < cl.dim(); ++a)
    for (int b = 0; b < cl.dim(); ++b) {
      const Mat ac = cl.gamma[a] * cl.gamma[b] + cl.gamma[b] * cl.gamma[a];
      const Mat expected = (a == b ? 2.0 : 0.0) * Mat::Identity(d, d);
      worst = std::max(worst, max_abs(Mat(ac - expected)));
    }
  return worst;
}

Outcome criterion1() {
  Outcome o;
  const auto t0 = Clock::now();
  for (int n : {1, 2}) {
    const auto cl = build_clifford(n);
    const double ac = anticommutator_defect(cl);
    const auto d = cl.spinor_dim();
    double grading = max_abs(Mat(cl.gamma5 * cl.gamma5 - Mat::Identity(d, d)));
    for (const auto& g : cl.gamma) grading = std::max(grading, max_abs(Mat(cl.gamma5 * g + g * cl.gamma5)));
    Mat s = Mat::Zero(d, d);
    for (int a = 0; a < cl.dim(); ++a) s += cl.gamma[a] * (cl.gamma[a] / (2.0 * n));
    const double inv = max_abs(Mat(s - Mat::Identity(d, d)));
    const double lib = clifford_residuals(cl).max();
    o.require(ac <= 1e-12, "n=" + std::to_string(n) + " anticommutator " + fmt(ac));
    o.require(grading <= 1e-12, "n=" + std::to_string(n) + " grading " + fmt(grading));
    o.require(inv <= 1e-12, "n=" + std::to_string(n) + " right inverse " + fmt(inv));
    o.require(lib <= 1e-12, "n=" + std::to_string(n) + " library residuals " + fmt(lib));
  }
  const double t = seconds_since(t0);
  o.require(t < 1.0, "runtime " + fmt(t) + " s");
  return o;
}

Outcome criterion2() {
  Outcome o;
  const auto t0 = Clock::now();
  const Pipeline p(registry::ew_reference());
  // lambda (r^2 - v^2)^2 has second radial derivative 8 lambda v^2 at r = v
  const double radial = 8.0 * p.c.lambda * p.c.v * p.c.v;
  o.require(std::abs(p.vac.z0.norm() - 2.0) <= 1e-8, "|z0| = " + fmt(p.vac.z0.norm()));
  o.require(p.vac.isotropy.dim == 1, "isotropy dim " + std::to_string(p.vac.isotropy.dim));
  o.require(p.vac.goldstone_basis.cols() == 3, "goldstone count " + std::to_string(p.vac.goldstone_basis.cols()));
  o.require(p.vac.physical_basis.cols() == 1, "physical count " + std::to_string(p.vac.physical_basis.cols()));
  const bool one = p.vac.transversal_hessian_eigs.size() == 1;
  o.require(one && std::abs(p.vac.transversal_hessian_eigs[0] - radial) <= 1e-6 * radial,
            "transversal Hessian " + (one ? fmt(p.vac.transversal_hessian_eigs[0]) : std::string("missing")));
  const double t = seconds_since(t0);
  o.require(t < 1.0, "runtime " + fmt(t) + " s");
  return o;
}

Outcome criterion3() {
  Outcome o;
  const auto t0 = Clock::now();
  const Pipeline p(registry::ew_reference());
  LemmaOptions lo;
  lo.orbit_samples = 20;
  const auto rep = lemma_verify(p.c.yukawa, p.md, p.vac, p.f, p.model, lo);
  o.require(rep.commutant_residual <= 1e-12, "commutant " + fmt(rep.commutant_residual));
  o.require(rep.orbit_spectrum_residual <= 1e-9, "orbit spectrum " + fmt(rep.orbit_spectrum_residual));
  o.require(rep.reconstruction_residual <= 1e-10, "reconstruction " + fmt(rep.reconstruction_residual));

  // independent orbit oracle: 20 random orbit points, spectra of -D^2 by direct diagonalization
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(-std::numbers::pi, std::numbers::pi);
  double worst = 0.0;
  for (int s = 0; s < 20; ++s) {
    RVec c(4);
    for (int i = 0; i < 4; ++i) c(i) = u(rng);
    const Mat d = apply_yukawa(p.c.yukawa, Vec(exp_map(p.model.rep, c) * p.vac.z0));
    Eigen::SelfAdjointEigenSolver<Mat> es(Mat(-d * d), Eigen::EigenvaluesOnly);
    const std::vector<double> ev(es.eigenvalues().data(), es.eigenvalues().data() + 3);
    worst = std::max(worst, max_rel_diff(ev, {0.0, 1.0, 1.0}));
  }
  o.require(worst <= 1e-9, "orbit oracle " + fmt(worst));

  // negative control: y_R off by 5%
  const Pipeline bad(registry::ew_reference(0.5, -2.0 * 1.05));
  const double eq = check_equivariance(bad.c.yukawa, bad.model.rep, bad.f);
  const auto brep = lemma_verify(bad.c.yukawa, bad.md, bad.vac, bad.f, bad.model, lo);
  o.require(eq >= 1e-3, "control equivariance residual " + fmt(eq));
  o.require(!brep.orbit_ok(), "control orbit-invariance clause did not fail");
  const double t = seconds_since(t0);
  o.require(t < 5.0, "runtime " + fmt(t) + " s");
  return o;
}

Outcome criterion4() {
  Outcome o;
  const Pipeline p(registry::ew_reference());
  // oracle: M M^dagger = diag(0, (y_e v)^2) on the left doublet, (y_e v)^2 on the right singlet
  const double me2 = std::pow(0.5 * 2.0, 2);
  o.require(p.md.eigenspaces.size() == 2, "block count " + std::to_string(p.md.eigenspaces.size()));
  if (p.md.eigenspaces.size() != 2) return o;
  const auto& nu = p.md.eigenspaces[0];
  const auto& e = p.md.eigenspaces[1];
  o.require(nu.m2 == 0.0 && nu.left.cols() == 1 && nu.right.cols() == 0, "massless block shape");
  o.require(nu.left.cols() == 1 && std::abs(std::abs(nu.left(0, 0)) - 1.0) <= 1e-10, "massless block is not the upper slot");
  o.require(std::abs(e.m2 - me2) <= 1e-10, "electron m^2 " + fmt(e.m2));
  o.require(e.left.cols() == 1 && e.right.cols() == 1, "electron block is not a (1,1) pair");
  o.require(e.left.cols() == 1 && std::abs(std::abs(e.left(1, 0)) - 1.0) <= 1e-10, "electron block is not the lower slot");
  o.require(reconstruction_residual(p.md) <= 1e-10, "reconstruction " + fmt(reconstruction_residual(p.md)));
  return o;
}

Outcome criterion5() {
  Outcome o;
  double slowest = 0.0;
  for (int L : {2, 4}) {
    auto c = registry::ew_reference();
    c.lattice = TorusLattice{1, L, 1.0, DerivativeKind::fourier_spectral};
    const Pipeline p(c);
    const auto t0 = Clock::now();
    const auto sq = spectrum(p.dirac(), true);
    slowest = std::max(slowest, seconds_since(t0));
    const auto oracle = momentum_oracle(L, {{0, 0.0}, {0, 1.0}, {0, 1.0}}, {0.0, 0.0}, 1.0);
    const double r = max_rel_diff(sq, oracle);
    o.require(r <= 1e-9, "L=" + std::to_string(L) + " residual " + fmt(r));
  }
  o.require(slowest < 30.0, "runtime " + fmt(slowest) + " s");
  return o;
}

Outcome criterion6() {
  Outcome o;
  for (double ye : {0.5, 0.0}) {
    const Pipeline p(registry::ew_reference(ye));
    const auto lap = bochner_laplacian(clifford_connection(p.c.lattice, p.cl, p.md, p.f));
    try {
      const auto vd = dirac_potential(p.dirac(), lap, 1e-10);
      const auto dens = lagrangian_density(vd, p.c.lattice);
      const double sum_m2 = 2.0 * std::pow(ye * 2.0, 2);  // electron pair, neutrino massless
      const double expected = 2.0 * sum_m2;               // 2^n with n = 1
      const std::string tag = "y_e=" + fmt(ye) + " ";
      o.require(vd.leakage <= 1e-10, tag + "leakage " + fmt(vd.leakage));
      o.require(std::abs(dens.per_site_trace - expected) <= 1e-9, tag + "trace " + fmt(dens.per_site_trace));
      o.require(std::abs(dens.per_site_trace - 2.0 * 3.0 * mean_mass(p.md)) <= 1e-12, tag + "mean-mass identity");
      if (ye == 0.0) o.require(dens.density == 0.0, "zero coupling density " + fmt(dens.density));
    } catch (const NotMultiplicationOperator& e) {
      o.require(false, e.what());
    }
  }
  return o;
}

Outcome criterion7() {
  Outcome o;
  std::vector<ModelConfig> family;
  for (double ye : {0.0, 0.1, 0.25, 0.5, 1.0, 2.0}) family.push_back(registry::ew_reference(ye));
  family.push_back(registry::ew_down_quark(0.3));
  family.push_back(registry::ew_up_quark(0.7));
  family.push_back(registry::u1_phase(0.5));
  family.push_back(registry::u1_phase(0.0));
  for (const auto& c : family) {
    const Pipeline p(c);
    const auto conn = build_vacuum_connection(p.c.lattice, p.cl, p.md, p.f);
    const auto curv = relative_curvature(conn, p.cl, p.md, p.f);
    // oracle for the internal factor: -D^2 computed here
    const Mat m2 = -p.md.D * p.md.D;
    const Mat xi01 = (p.cl.gamma[0] * p.cl.gamma[1] - p.cl.gamma[1] * p.cl.gamma[0]) / 4.0;
    const Mat expected = kron(Mat::Identity(p.c.lattice.sites(), p.c.lattice.sites()), kron(xi01, m2));
    const double r = max_abs(Mat(commutator(conn[0].matrix, conn[1].matrix) - expected));
    const std::string tag = c.name + "(" + fmt(std::abs(c.yukawa.tensor[0]) + std::abs(c.yukawa.tensor.back())) + ") ";
    o.require(r <= 1e-12, tag + "curvature residual " + fmt(r));
    o.require(curv.residual <= 1e-12, tag + "library residual " + fmt(curv.residual));
    const bool massless = max_abs(m2) == 0.0;
    const bool flat = curv.max_norm <= 1e-12;
    o.require(flat == massless, tag + "flat/massless mismatch");
  }
  return o;
}

Outcome criterion8() {
  Outcome o;
  const Pipeline p(registry::ew_reference());
  const auto op = p.dirac();
  const auto spec = spectrum(op, false);
  const int ns = p.c.lattice.sites();
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-std::numbers::pi, std::numbers::pi);
  double iso = 0.0, broken = 0.0, pure = 0.0;
  for (int s = 0; s < 5; ++s) {
    const Mat uh = exp_map(p.f.total, u(rng) * p.vac.isotropy.element(0));
    iso = std::max(iso, max_abs(Mat(gauge_transform(op, std::vector<Mat>(ns, uh), p.f).matrix - op.matrix)));
    RVec c(4);
    for (int i = 0; i < 4; ++i) c(i) = u(rng);
    const Mat ug = exp_map(p.f.total, c);
    broken = std::max(broken, max_rel_diff(spectrum(gauge_transform(op, std::vector<Mat>(ns, ug), p.f), false), spec));
    const Vec phi = exp_map(p.model.rep, c) * p.vac.z0 - p.vac.z0;
    const auto fl = fluctuation_operator(op, constant_higgs_fluctuation(p.c.lattice, phi), p.c.yukawa, p.cl, p.f, 1.0);
    pure = std::max(pure, max_rel_diff(spectrum(fl, false), spec));
  }
  o.require(iso <= 1e-12, "residual-H entrywise " + fmt(iso));
  o.require(broken <= 1e-10, "constant G spectrum " + fmt(broken));
  o.require(pure <= 1e-10, "pure-gauge fluctuation spectrum " + fmt(pure));
  return o;
}

Outcome criterion9() {
  Outcome o;
  const std::vector<double> theta{0.3, -0.45};
  const double qnorm = std::sqrt(1.25);  // |T3 + Y/2| in generator coefficients
  struct Case {
    ModelConfig c;
    std::vector<State> states;
  };
  // leptons: neutrino 0; electron -1 (left and right). down quarks: up_L +2/3; down -1/3 (left and right).
  const double me2 = 1.0, md2 = 1.0;
  const std::vector<Case> cases{{registry::ew_reference(), {{0.0, 0.0}, {-1.0, me2}, {-1.0, me2}}},
                                {registry::ew_down_quark(), {{2.0 / 3.0, 0.0}, {-1.0 / 3.0, md2}, {-1.0 / 3.0, md2}}}};
  for (const auto& k : cases) {
    const Pipeline p(k.c);
    const auto wl = make_wilson_line({RVec::Constant(1, theta[0]), RVec::Constant(1, theta[1])}, p.vac.isotropy);
    const auto sq = spectrum(p.dirac(wl), true);
    const double r = max_rel_diff(sq, momentum_oracle(4, k.states, theta, qnorm));
    o.require(r <= 1e-9, k.c.name + " residual " + fmt(r));
  }
  return o;
}

Outcome criterion10() {
  Outcome o;
  const Pipeline p(registry::ew_reference());
  const auto op = p.dirac();
  const auto zero = fluctuation_operator(op, constant_higgs_fluctuation(p.c.lattice, p.vac.z0), p.c.yukawa, p.cl, p.f, 0.0);
  o.require(zero.matrix == op.matrix, "t = 0 is not bitwise identical");
  const double h = 0.25;
  const GoldstoneSplit split{p.vac.goldstone_basis, p.vac.physical_basis};
  const Vec phi = h * complexify(p.vac.physical_basis.col(0));
  const auto fl = fluctuation_operator(op, constant_higgs_fluctuation(p.c.lattice, phi), p.c.yukawa, p.cl, p.f, 1.0, &split);
  const double m2 = std::pow(0.5 * (2.0 + h), 2);  // (y_e (v + h))^2
  const double r = max_rel_diff(spectrum(fl, true), momentum_oracle(4, {{0, 0.0}, {0, m2}, {0, m2}}, {0, 0}, 1.0));
  o.require(r <= 1e-9, "shifted dispersion residual " + fmt(r));
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"clifford identities (n = 1, 2)", criterion1},
      {"electroweak breaking", criterion2},
      {"mass matrix lemma and negative control", criterion3},
      {"eigenbundle split", criterion4},
      {"dispersion (L = 2, 4)", criterion5},
      {"dirac potential and lagrangian", criterion6},
      {"curvature identity over model family", criterion7},
      {"gauge covariance", criterion8},
      {"wilson-line momentum shift", criterion9},
      {"fluctuation family", criterion10},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    failed += o.pass ? 0 : 1;
    std::printf("[%s] %2zu %s%s%s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                o.detail.empty() ? "" : " : ", o.detail.c_str());
  }
  std::printf("%zu/%zu criteria passed\n", criteria.size() - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
