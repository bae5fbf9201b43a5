#pragma once

#include <numbers>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "model.hpp"
#include "operator_io.hpp"

namespace fermass {

using ojson = nlohmann::ordered_json;

enum class Relation { le, ge, gt, eq };

inline const char* to_string(Relation r) {
  switch (r) {
    case Relation::le: return "<=";
    case Relation::ge: return ">=";
    case Relation::gt: return ">";
    default: return "==";
  }
}

struct Check {
  std::string section;
  std::string name;
  double value = 0.0;
  Relation relation = Relation::le;
  double tolerance = 0.0;
  bool pass = false;
};

/// Structured results of one command. Every tested number is recorded as a
/// Check with the threshold it was compared against; verdicts follow from
/// the entries alone.
class Report {
 public:
  explicit Report(std::string command, std::string model) : command_(std::move(command)), model_(std::move(model)) {}

  ojson& section(const std::string& name) {
    if (!body_.contains(name)) body_[name] = ojson::object();
    return body_[name];
  }

  bool check(const std::string& sec, const std::string& name, double value, double tolerance,
             Relation rel = Relation::le) {
    bool pass = false;
    switch (rel) {
      case Relation::le: pass = value <= tolerance; break;
      case Relation::ge: pass = value >= tolerance; break;
      case Relation::gt: pass = value > tolerance; break;
      case Relation::eq: pass = value == tolerance; break;
    }
    checks_.push_back({sec, name, value, rel, tolerance, pass});
    section(sec)["checks"][name] = {{"value", value}, {"relation", to_string(rel)}, {"tolerance", tolerance}, {"pass", pass}};
    return pass;
  }

  /// Records an invariant failure that stopped a stage.
  void fail(const std::string& sec, const std::string& kind, const std::string& message) {
    section(sec)["error"] = {{"kind", kind}, {"message", message}};
    checks_.push_back({sec, "error:" + kind, 1.0, Relation::eq, 0.0, false});
  }

  void input_error(const std::string& message) {
    input_error_ = true;
    body_["input_error"] = message;
  }

  bool passed() const {
    if (input_error_) return false;
    for (const auto& c : checks_)
      if (!c.pass) return false;
    return true;
  }
  int exit_code() const { return input_error_ ? 2 : (passed() ? 0 : 1); }
  const std::vector<Check>& checks() const { return checks_; }
  const ojson& body() const { return body_; }

  ojson to_json() const {
    ojson j;
    j["report_schema"] = 1;
    j["command"] = command_;
    j["model"] = model_;
    for (const auto& [k, v] : body_.items()) j[k] = v;
    int failed = 0;
    for (const auto& c : checks_) failed += c.pass ? 0 : 1;
    j["summary"] = {{"checks", checks_.size()}, {"failed", failed}, {"passed", passed()}, {"exit_code", exit_code()}};
    return j;
  }

  std::string to_csv() const {
    std::ostringstream out;
    out << "section,check,value,relation,tolerance,pass\n";
    for (const auto& c : checks_)
      out << c.section << ',' << c.name << ',' << format_g17(c.value) << ',' << to_string(c.relation) << ','
          << format_g17(c.tolerance) << ',' << (c.pass ? "true" : "false") << '\n';
    return out.str();
  }

 private:
  std::string command_;
  std::string model_;
  ojson body_ = ojson::object();
  std::vector<Check> checks_;
  bool input_error_ = false;
};

namespace detail {

inline ojson to_json(const Vec& z) {
  ojson a = ojson::array();
  for (Eigen::Index i = 0; i < z.size(); ++i) a.push_back({z(i).real(), z(i).imag()});
  return a;
}

inline ojson to_json(const Mat& m) {
  ojson a = ojson::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    ojson row = ojson::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back({m(i, j).real(), m(i, j).imag()});
    a.push_back(row);
  }
  return a;
}

/// Columns of a real matrix as a list of vectors.
inline ojson columns_to_json(const RMat& m) {
  ojson a = ojson::array();
  for (Eigen::Index c = 0; c < m.cols(); ++c) {
    ojson col = ojson::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) col.push_back(m(r, c));
    a.push_back(col);
  }
  return a;
}

inline RVec random_coeffs(std::mt19937_64& rng, int m) {
  std::uniform_real_distribution<double> angle(-std::numbers::pi, std::numbers::pi);
  RVec c(m);
  for (int i = 0; i < m; ++i) c(i) = angle(rng);
  return c;
}

inline constexpr std::uint64_t kReportSeed = 5122002;

}  // namespace detail

/// Intermediate results shared by the pipeline stages.
struct PipelineState {
  std::optional<VacuumSolution> vacuum;
  std::optional<MassData> masses;
};

inline void stage_clifford(const ModelConfig& c, Report& r) {
  const auto& tol = c.tolerances;
  auto& sec = r.section("clifford");
  for (Signature sig : {Signature::euclidean, Signature::lorentzian}) {
    const auto cl = build_clifford(c.lattice.n, sig);
    const auto res = clifford_residuals(cl);
    const std::string p = to_string(sig);
    sec[p] = {{"n", cl.n}, {"spinor_dim", cl.spinor_dim()}, {"xi_scale", cl.xi_scale}};
    r.check("clifford", p + ".anticommutator", res.anticommutator, tol.clifford);
    r.check("clifford", p + ".gamma5_square", res.gamma5_square, tol.clifford);
    r.check("clifford", p + ".gamma5_anticommute", res.gamma5_anticommute, tol.clifford);
    r.check("clifford", p + ".traces", res.traces, tol.clifford);
    r.check("clifford", p + ".right_inverse", res.right_inverse, tol.clifford);
    r.check("clifford", p + ".hermiticity_convention", res.hermiticity, tol.clifford);
  }
}

inline void stage_model_checks(const ModelConfig& c, Report& r) {
  const auto& tol = c.tolerances;
  auto& sec = r.section("model");
  sec["generators"] = c.generator_labels;
  for (const auto& [key, rep] : c.representations) {
    double ah = 0.0;
    for (const auto& g : rep.generators) ah = std::max(ah, anti_hermiticity_defect(g));
    sec["representations"][key] = {{"dim", rep.rep_dim()}};
    r.check("model", key + ".anti_hermiticity", ah, tol.anti_hermitian);
    r.check("model", key + ".closure", closure_residual(rep), tol.closure);
  }
  const auto f = c.fermions();
  sec["N_L"] = f.n_l();
  sec["N_R"] = f.n_r();
  sec["N_F"] = f.n_f();
  sec["N_H"] = c.rep(c.higgs_rep).rep_dim();
  r.check("model", "yukawa_equivariance", check_equivariance(c.yukawa, c.rep(c.higgs_rep), f), tol.equivariance);
}

inline void stage_break(const ModelConfig& c, Report& r, PipelineState& st) {
  const auto& tol = c.tolerances;
  const auto model = c.higgs_model();
  MinimizeOptions opt;
  opt.grad_tol = tol.gradient;
  opt.rank_cut = tol.rank_cut;
  auto& sec = r.section("vacuum");
  sec["potential"] = c.potential == PotentialKind::mexican_hat ? "mexican_hat" : "custom_polynomial";
  sec["seed"] = detail::to_json(c.seed);
  VacuumSolution vac;
  try {
    vac = minimize(model, c.seed, opt);
  } catch (const SaddleConverged& e) {
    r.fail("vacuum", "SaddleConverged", e.what());
    return;
  } catch (const DegenerateVacuum& e) {
    r.fail("vacuum", "DegenerateVacuum", e.what());
    return;
  } catch (const NonConvergence& e) {
    r.fail("vacuum", "NonConvergence", e.what());
    return;
  }
  const auto& rep = model.rep;
  sec["z0"] = detail::to_json(vac.z0);
  sec["norm"] = vac.z0.norm();
  sec["value"] = vac.value;
  sec["iterations"] = vac.iterations;
  sec["isotropy"] = {{"dim", vac.isotropy.dim}, {"basis", detail::columns_to_json(vac.isotropy.basis)}};
  sec["goldstone_count"] = vac.goldstone_basis.cols();
  sec["physical_count"] = vac.physical_basis.cols();
  sec["goldstone_basis"] = detail::columns_to_json(vac.goldstone_basis);
  sec["physical_basis"] = detail::columns_to_json(vac.physical_basis);
  sec["transversal_hessian_eigs"] = vac.transversal_hessian_eigs;

  r.check("vacuum", "gradient_norm", vac.gradient_norm, tol.gradient * std::max(1.0, vac.z0.norm()));
  if (c.potential == PotentialKind::mexican_hat) {
    r.check("vacuum", "radius_error", std::abs(vac.z0.norm() - c.v), tol.vacuum_radius);
    // d^2/dr^2 of lambda (r^2 - v^2)^2 at r = v
    const double radial = 8.0 * c.lambda * c.v * c.v;
    sec["radial_hessian_closed_form"] = radial;
    double best = std::numeric_limits<double>::infinity();
    for (double e : vac.transversal_hessian_eigs) best = std::min(best, std::abs(e - radial) / radial);
    r.check("vacuum", "radial_hessian_rel_error", best, tol.transversal_hessian);
  }
  r.check("vacuum", "goldstone_plus_isotropy_minus_dim_g",
          static_cast<double>(vac.goldstone_basis.cols() + vac.isotropy.dim - rep.dim_g()), 0.0, Relation::eq);
  const RMat h = hessian(model, vac.z0);
  r.check("vacuum", "hessian_on_goldstone", vac.goldstone_basis.cols() ? max_abs(RMat(vac.goldstone_basis.transpose() * h * vac.goldstone_basis)) : 0.0,
          tol.goldstone_hessian);
  double min_eig = std::numeric_limits<double>::infinity();
  for (double e : vac.transversal_hessian_eigs) min_eig = std::min(min_eig, e);
  if (!vac.transversal_hessian_eigs.empty()) r.check("vacuum", "transversal_hessian_min", min_eig, 0.0, Relation::gt);

  double iso_ok = 0.0;
  for (int k = 0; k < vac.isotropy.dim; ++k)
    iso_ok = std::max(iso_ok, infinitesimal_action(rep, vac.isotropy.element(k), vac.z0).norm() / std::max(1.0, vac.z0.norm()));
  r.check("vacuum", "isotropy_annihilates_z0", iso_ok, 1e-10);

  std::mt19937_64 rng(detail::kReportSeed);
  double inv = 0.0, dim_diff = 0.0;
  for (int s = 0; s < 5; ++s) {
    const Mat u = exp_map(rep, detail::random_coeffs(rng, rep.dim_g()));
    const Vec z1 = u * vac.z0;
    inv = std::max(inv, std::abs(potential_eval(model, z1) - vac.value) / std::max(1.0, std::abs(vac.value)));
    dim_diff = std::max(dim_diff, std::abs(static_cast<double>(isotropy_algebra(rep, z1, tol.rank_cut).dim - vac.isotropy.dim)));
  }
  r.check("vacuum", "orbit_potential_invariance", inv, tol.potential_invariance);
  r.check("vacuum", "orbit_isotropy_dim_change", dim_diff, 0.0, Relation::eq);
  st.vacuum = std::move(vac);
}

inline void stage_masses(const ModelConfig& c, Report& r, PipelineState& st) {
  if (!st.vacuum) return;
  const auto& tol = c.tolerances;
  const auto f = c.fermions();
  const auto model = c.higgs_model();
  auto& sec = r.section("masses");
  r.check("masses", "yukawa_equivariance", check_equivariance(c.yukawa, model.rep, f), tol.equivariance);
  MassData md;
  try {
    md = mass_matrix(c.yukawa, *st.vacuum, tol.block_structure, tol.group);
  } catch (const BlockStructureViolation& e) {
    r.fail("masses", "BlockStructureViolation", e.what());
    return;
  }
  sec["N_L"] = md.n_l;
  sec["N_R"] = md.n_r;
  sec["N_F"] = md.n_f();
  sec["M_F"] = detail::to_json(md.M_F);
  sec["spectrum_sq"] = md.spectrum_sq;
  sec["trace_left"] = (md.M_F * md.M_F.adjoint()).trace().real();
  sec["trace_right"] = (md.M_F.adjoint() * md.M_F).trace().real();
  ojson blocks = ojson::array();
  int massive = 0;
  for (const auto& b : md.eigenspaces) {
    const std::string label = b.m2 == 0.0 ? "massless" : "massive_" + std::to_string(massive++);
    blocks.push_back({{"label", label},
                      {"m2", b.m2},
                      {"left_dim", b.left.cols()},
                      {"right_dim", b.right.cols()},
                      {"left_basis", detail::to_json(b.left)},
                      {"right_basis", detail::to_json(b.right)}});
  }
  sec["eigenbundles"] = blocks;
  sec["mean_mass"] = mean_mass(md);

  LemmaOptions lo;
  lo.commutant_tol = tol.commutant;
  lo.orbit_tol = tol.orbit;
  lo.reconstruction_tol = tol.reconstruction;
  const auto lemma = lemma_verify(c.yukawa, md, *st.vacuum, f, model, lo);
  r.check("lemma", "commutant_residual", lemma.commutant_residual, tol.commutant);
  r.check("lemma", "orbit_spectrum_residual", lemma.orbit_spectrum_residual, tol.orbit);
  r.check("lemma", "orbit_intertwining_residual", lemma.orbit_intertwining_residual, tol.orbit);
  r.check("lemma", "reconstruction_residual", lemma.reconstruction_residual, tol.reconstruction);
  r.check("lemma", "decomposition_dim_minus_N_F", static_cast<double>(lemma.decomposition_dim - lemma.n_f), 0.0, Relation::eq);
  auto& ls = r.section("lemma");
  ls["orbit_samples"] = lo.orbit_samples;
  ls["clauses"] = {{"commutant", lemma.commutant_ok()}, {"orbit_invariance", lemma.orbit_ok()},
                   {"eigenbundle_decomposition", lemma.decomposition_ok()}};
  if (!lemma.passed()) ls["lemma_violation"] = lemma.failure_message();
  st.masses = std::move(md);
}

inline void stage_lattice(const ModelConfig& c, Report& r, PipelineState& st, LatticeOperator* dirac_out = nullptr,
                          std::vector<std::vector<double>>* spectra_out = nullptr) {
  if (!st.vacuum || !st.masses) return;
  const auto& tol = c.tolerances;
  const auto& lat = c.lattice;
  const auto& md = *st.masses;
  const auto& vac = *st.vacuum;
  const auto f = c.fermions();
  const auto model = c.higgs_model();
  const auto cl = build_clifford(lat.n);
  const int sd = cl.spinor_dim();
  auto& sec = r.section("lattice");
  sec["n"] = lat.n;
  sec["L"] = lat.L;
  sec["a"] = lat.a;
  sec["derivative"] = to_string(lat.derivative);
  sec["operator_dim"] = lat.sites() * sd * f.n_f();

  auto dirac = build_vacuum_dirac(lat, cl, md, f);
  dirac.sources = {c.name};
  if (dirac_out) *dirac_out = dirac;
  const auto sq = spectrum(dirac, true, tol.hermitian);
  const auto closed = free_dispersion(lat, md.spectrum_sq, sd);
  sec["spectrum_sq"] = sq;
  sec["closed_form"] = closed;
  if (spectra_out) *spectra_out = {sq, closed};
  r.check("lattice", "dispersion_rel_residual", max_rel_diff(sq, closed), tol.dispersion);

  const auto conn = build_vacuum_connection(lat, cl, md, f);
  r.check("lattice", "contraction_residual", max_abs(Mat(contract_connection(conn, cl).matrix - dirac.matrix)),
          tol.contraction);

  // Dirac potential against the Clifford-connection Laplacian.
  const auto lap = bochner_laplacian(clifford_connection(lat, cl, md, f));
  auto& lg = r.section("lagrangian");
  try {
    const auto vd = dirac_potential(dirac, lap);
    const auto dens = lagrangian_density(vd, lat);
    double sum_m2 = 0.0;
    for (double m2 : md.spectrum_sq) sum_m2 += m2;
    const double expected = sd * sum_m2;
    lg["per_site_trace"] = dens.per_site_trace;
    lg["volume_element"] = dens.volume_element;
    lg["density"] = dens.density;
    lg["mean_mass"] = mean_mass(md);
    lg["scalar_curvature"] = dens.scalar_curvature;
    lg["note"] = dens.note;
    r.check("lagrangian", "site_leakage", vd.leakage, tol.leakage);
    r.check("lagrangian", "site_block_deviation", vd.block_deviation, tol.leakage);
    r.check("lagrangian", "trace_vs_spectrum", std::abs(dens.per_site_trace - expected) / std::max(1.0, expected),
            tol.trace);
    r.check("lagrangian", "trace_vs_mean_mass",
            std::abs(dens.per_site_trace - sd * md.n_f() * mean_mass(md)) / std::max(1.0, expected),
            tol.mean_mass_identity);
    r.check("lagrangian", "site_block_minus_mass_squared",
            max_abs(Mat(vd.site_block - kron(Mat::Identity(sd, sd), md.mass_squared()))), tol.trace);
  } catch (const NotMultiplicationOperator& e) {
    r.fail("lagrangian", "NotMultiplicationOperator", e.what());
  }

  const auto curv = relative_curvature(conn, cl, md, f);
  bool massless = true;
  for (double m2 : md.spectrum_sq) massless = massless && m2 <= tol.flatness;
  const bool flat = curv.max_norm <= tol.flatness;
  auto& cs = r.section("curvature");
  cs["max_norm"] = curv.max_norm;
  cs["flat"] = flat;
  cs["massless"] = massless;
  r.check("curvature", "residual", curv.residual, tol.curvature);
  r.check("curvature", "flat_iff_massless_mismatch", flat == massless ? 0.0 : 1.0, 0.0, Relation::eq);

  // Gauge covariance.
  std::mt19937_64 rng(detail::kReportSeed);
  double iso_res = 0.0;
  for (int k = 0; k < vac.isotropy.dim; ++k) {
    const Mat u = exp_map(f.total, 0.7 * vac.isotropy.element(k));
    const auto t = gauge_transform(dirac, std::vector<Mat>(lat.sites(), u), f);
    iso_res = std::max(iso_res, max_abs(Mat(t.matrix - dirac.matrix)));
  }
  r.check("gauge", "isotropy_entrywise_residual", iso_res, tol.gauge_invariance);
  const auto spec = spectrum(dirac, false, tol.hermitian);
  double broken_res = 0.0, pure_res = 0.0;
  for (int s = 0; s < 3; ++s) {
    const RVec g = detail::random_coeffs(rng, model.rep.dim_g());
    const Mat uf = exp_map(f.total, g);
    broken_res = std::max(broken_res,
                          max_rel_diff(spectrum(gauge_transform(dirac, std::vector<Mat>(lat.sites(), uf), f), false), spec));
    const Vec phi = exp_map(model.rep, g) * vac.z0 - vac.z0;
    const auto fl = fluctuation_operator(dirac, constant_higgs_fluctuation(lat, phi), c.yukawa, cl, f, 1.0);
    pure_res = std::max(pure_res, max_rel_diff(spectrum(fl, false), spec));
  }
  r.check("gauge", "constant_transform_spectrum", broken_res, tol.gauge_spectrum);
  r.check("gauge", "pure_gauge_fluctuation_spectrum", pure_res, tol.gauge_spectrum);

  // Fluctuations.
  auto& fs = r.section("fluctuation");
  const auto zero = fluctuation_operator(dirac, constant_higgs_fluctuation(lat, vac.z0), c.yukawa, cl, f, 0.0);
  r.check("fluctuation", "t0_bitwise_mismatch", zero.matrix == dirac.matrix ? 0.0 : 1.0, 0.0, Relation::eq);
  if (vac.physical_basis.cols() > 0) {
    const GoldstoneSplit split{vac.goldstone_basis, vac.physical_basis};
    const Vec dir = complexify(vac.physical_basis.col(0));
    const Vec phi = c.fluctuation_h * dir;
    const auto fl = fluctuation_operator(dirac, constant_higgs_fluctuation(lat, phi), c.yukawa, cl, f, 1.0, &split);
    const auto shifted = mass_matrix_at(c.yukawa, Vec(vac.z0 + phi), 1e-10, tol.group);
    fs["h"] = c.fluctuation_h;
    fs["direction"] = detail::to_json(dir);
    fs["shifted_spectrum_sq"] = shifted.spectrum_sq;
    r.check("fluctuation", "physical_shift_dispersion",
            max_rel_diff(spectrum(fl, true), free_dispersion(lat, shifted.spectrum_sq, sd)), tol.fluctuation);
    try {
      const auto vd = dirac_potential(fl, lap);
      fs["fluctuated_per_site_trace"] = lagrangian_density(vd, lat).per_site_trace;
    } catch (const NotMultiplicationOperator&) {
      fs["fluctuated_per_site_trace"] = nullptr;
    }
  }

  // Wilson line.
  if (c.wilson_theta) {
    auto& ws = r.section("wilson");
    try {
      const auto wl = make_wilson_line(*c.wilson_theta, vac.isotropy);
      const auto a = wilson_connection(wl, f.total, lat.dim());
      const auto op = build_vacuum_dirac(lat, cl, md, f, wl);
      const auto wsq = spectrum(op, true, tol.hermitian);
      r.check("wilson", "dispersion_rel_residual", max_rel_diff(wsq, wilson_dispersion(lat, md, a, sd)), tol.wilson);
      const auto vdw = dirac_potential(op, bochner_laplacian(clifford_connection(lat, cl, md, f, wl)));
      r.check("wilson", "potential_unchanged",
              max_abs(Mat(vdw.site_block - kron(Mat::Identity(sd, sd), md.mass_squared()))), tol.trace);
      ojson table = ojson::array();
      for (const auto& b : md.eigenspaces) {
        Mat basis = Mat::Zero(md.n_f(), b.left.cols() + b.right.cols());
        if (b.left.cols()) basis.topLeftCorner(md.n_l, b.left.cols()) = b.left;
        if (b.right.cols()) basis.bottomRightCorner(md.n_r, b.right.cols()) = b.right;
        ojson shifts = ojson::array();
        for (int ax = 0; ax < lat.dim(); ++ax) {
          const Mat h = -kI * basis.adjoint() * a[ax] * basis;
          Eigen::SelfAdjointEigenSolver<Mat> es(Mat(0.5 * (h + h.adjoint())), Eigen::EigenvaluesOnly);
          std::vector<double> ev(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
          shifts.push_back(ev);
        }
        table.push_back({{"m2", b.m2}, {"momentum_shift_per_axis", shifts}});
      }
      ws["theta"] = ojson::array();
      for (const auto& t : *c.wilson_theta) ws["theta"].push_back(std::vector<double>(t.data(), t.data() + t.size()));
      ws["shift_table"] = table;
    } catch (const std::exception& e) {
      r.fail("wilson", "InvalidWilsonLine", e.what());
    }
  }
}

inline Report cmd_check(const ModelConfig& c) {
  Report r("check", c.name);
  stage_model_checks(c, r);
  stage_clifford(c, r);
  return r;
}

inline Report cmd_break(const ModelConfig& c) {
  Report r("break", c.name);
  PipelineState st;
  stage_break(c, r, st);
  return r;
}

inline Report cmd_masses(const ModelConfig& c) {
  Report r("masses", c.name);
  PipelineState st;
  stage_break(c, r, st);
  stage_masses(c, r, st);
  return r;
}

inline Report cmd_lattice(const ModelConfig& c, LatticeOperator* dirac_out = nullptr,
                          std::vector<std::vector<double>>* spectra_out = nullptr) {
  Report r("lattice", c.name);
  PipelineState st;
  stage_break(c, r, st);
  stage_masses(c, r, st);
  stage_lattice(c, r, st, dirac_out, spectra_out);
  return r;
}

inline Report cmd_verify_all(const ModelConfig& c, LatticeOperator* dirac_out = nullptr,
                             std::vector<std::vector<double>>* spectra_out = nullptr) {
  Report r("verify-all", c.name);
  PipelineState st;
  stage_model_checks(c, r);
  stage_clifford(c, r);
  stage_break(c, r, st);
  stage_masses(c, r, st);
  stage_lattice(c, r, st, dirac_out, spectra_out);
  return r;
}

}  // namespace fermass
