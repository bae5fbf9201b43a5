#pragma once

#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "clifford.hpp"
#include "yukawa_mass.hpp"

namespace fermass {

enum class DerivativeKind { fourier_spectral, central_difference };

inline const char* to_string(DerivativeKind k) {
  return k == DerivativeKind::fourier_spectral ? "fourier_spectral" : "central_difference";
}

/// Flat periodic lattice (Z_L)^{2n} with spacing a. Site index is
/// sum_a x_a L^a, so axis 0 runs fastest.
struct TorusLattice {
  int n = 1;
  int L = 4;
  double a = 1.0;
  DerivativeKind derivative = DerivativeKind::fourier_spectral;

  int dim() const { return 2 * n; }
  int sites() const {
    int s = 1;
    for (int k = 0; k < dim(); ++k) s *= L;
    return s;
  }
  std::vector<int> coords(int site) const {
    std::vector<int> x(dim());
    for (int k = 0; k < dim(); ++k) {
      x[k] = site % L;
      site /= L;
    }
    return x;
  }
  /// 2 pi m / (L a), m = 0..L-1
  double momentum(int m) const { return 2.0 * std::numbers::pi * m / (L * a); }
  /// i * (eigenvalue of the 1D derivative on the plane wave with momentum index m)^*, i.e. the
  /// real number kappa with d e^{ikx} = i kappa e^{ikx}.
  double effective_momentum(int m) const {
    const double k = momentum(m);
    return derivative == DerivativeKind::fourier_spectral ? k : std::sin(k * a) / a;
  }
};

inline void validate_lattice(const TorusLattice& lat) {
  if (lat.n < 1) throw std::invalid_argument("lattice: n must be >= 1");
  if (lat.L < 1) throw std::invalid_argument("lattice: L must be >= 1");
  if (!(lat.a > 0.0)) throw std::invalid_argument("lattice: spacing must be positive");
}

enum class OperatorSymmetry { none, hermitian, anti_hermitian };

/// Dense operator on C^sites (x) C^spinor (x) C^internal, in that factor order.
struct LatticeOperator {
  Mat matrix;
  int sites = 0;
  int spinor_dim = 0;
  int internal_dim = 0;
  std::string kind;
  std::vector<std::string> sources;
  OperatorSymmetry symmetry = OperatorSymmetry::none;

  int fiber_dim() const { return spinor_dim * internal_dim; }
  Eigen::Index size() const { return matrix.rows(); }

  /// Throws if the declared symmetry or the declared shape does not match the matrix.
  void validate(double tol = 1e-10) const {
    if (matrix.rows() != matrix.cols() || matrix.rows() != static_cast<Eigen::Index>(sites) * fiber_dim())
      throw DimensionMismatch(kind + ": matrix shape does not match sites x spinor x internal");
    if (!matrix.allFinite()) throw InvariantViolation(kind + ": non-finite entries");
    const double scale = std::max(1.0, max_abs(matrix));
    if (symmetry == OperatorSymmetry::hermitian && hermiticity_defect(matrix) > tol * scale)
      throw NonHermitian(kind + ": declared Hermitian but is not");
    if (symmetry == OperatorSymmetry::anti_hermitian && anti_hermiticity_defect(matrix) > tol * scale)
      throw NonHermitian(kind + ": declared anti-Hermitian but is not");
  }
};

namespace detail {

inline LatticeOperator like(const LatticeOperator& shape, Mat m, std::string kind) {
  LatticeOperator op;
  op.matrix = std::move(m);
  op.sites = shape.sites;
  op.spinor_dim = shape.spinor_dim;
  op.internal_dim = shape.internal_dim;
  op.kind = std::move(kind);
  op.sources = shape.sources;
  return op;
}

inline void require_same_shape(const LatticeOperator& a, const LatticeOperator& b, const char* where) {
  if (a.sites != b.sites || a.spinor_dim != b.spinor_dim || a.internal_dim != b.internal_dim ||
      a.matrix.rows() != b.matrix.rows())
    throw DimensionMismatch(std::string(where) + ": operator shapes differ");
}

}  // namespace detail

/// L x L periodic derivative matrix along one axis.
inline Mat derivative_1d(const TorusLattice& lat) {
  const int L = lat.L;
  Mat d = Mat::Zero(L, L);
  if (lat.derivative == DerivativeKind::fourier_spectral) {
    for (int x = 0; x < L; ++x)
      for (int y = 0; y < L; ++y) {
        cplx acc = 0.0;
        for (int m = 0; m < L; ++m)
          acc += kI * lat.momentum(m) * std::exp(kI * (2.0 * std::numbers::pi * m * (x - y) / L));
        d(x, y) = acc / static_cast<double>(L);
      }
  } else {
    for (int x = 0; x < L; ++x) {
      d(x, (x + 1) % L) += 0.5 / lat.a;
      d(x, (x + L - 1) % L) -= 0.5 / lat.a;
    }
  }
  return d;
}

/// Derivative along `axis` acting on site space only.
inline Mat site_derivative(const TorusLattice& lat, int axis) {
  const Mat d1 = derivative_1d(lat);
  const int ns = lat.sites();
  int stride = 1;
  for (int k = 0; k < axis; ++k) stride *= lat.L;
  Mat d = Mat::Zero(ns, ns);
  for (int s = 0; s < ns; ++s) {
    const int x = (s / stride) % lat.L;
    const int base = s - x * stride;
    for (int y = 0; y < lat.L; ++y) d(s, base + y * stride) = d1(x, y);
  }
  return d;
}

/// Constant flat connection valued in the isotropy algebra:
/// A_a = sum_i theta[a](i) * (isotropy basis)_i.
struct WilsonLine {
  std::vector<RVec> theta;  // one coefficient vector per direction
  RMat isotropy_basis;      // dim_g x dim_iso
};

inline WilsonLine make_wilson_line(std::vector<RVec> theta, const IsotropyResult& iso) {
  for (const auto& t : theta)
    if (t.size() != iso.dim)
      throw DimensionMismatch("Wilson line: theta has " + std::to_string(t.size()) +
                              " entries, isotropy dimension is " + std::to_string(iso.dim));
  return {std::move(theta), iso.basis};
}

/// rho_F'(A_a) for each direction; throws if the connection is not flat.
inline std::vector<Mat> wilson_connection(const WilsonLine& wl, const LieAlgebraRep& rep, int directions,
                                          double flat_tol = 1e-12) {
  if (static_cast<int>(wl.theta.size()) != directions)
    throw DimensionMismatch("Wilson line: expected " + std::to_string(directions) + " directions, got " +
                            std::to_string(wl.theta.size()));
  std::vector<Mat> a;
  for (const auto& t : wl.theta) a.push_back(rep.element(wl.isotropy_basis * t));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = i + 1; j < a.size(); ++j)
      if (max_abs(commutator(a[i], a[j])) > flat_tol)
        throw InvariantViolation("Wilson line: connection is not flat ([A_a, A_b] != 0)");
  return a;
}

namespace detail {

struct Assembly {
  int sites, spin, internal;
  Mat id_sites, id_spin, id_int;

  Assembly(const TorusLattice& lat, const CliffordAlgebra& cl, int n_f)
      : sites(lat.sites()),
        spin(cl.spinor_dim()),
        internal(n_f),
        id_sites(Mat::Identity(sites, sites)),
        id_spin(Mat::Identity(spin, spin)),
        id_int(Mat::Identity(n_f, n_f)) {}

  Mat derivative(const Mat& site_op) const { return kron(site_op, kron(id_spin, id_int)); }
  Mat fiber(const Mat& spin_op, const Mat& int_op) const { return kron(id_sites, kron(spin_op, int_op)); }

  LatticeOperator wrap(Mat m, std::string kind, OperatorSymmetry sym) const {
    LatticeOperator op;
    op.matrix = std::move(m);
    op.sites = sites;
    op.spinor_dim = spin;
    op.internal_dim = internal;
    op.kind = std::move(kind);
    op.symmetry = sym;
    return op;
  }
};

inline void check_inputs(const TorusLattice& lat, const CliffordAlgebra& cl, const MassData& md,
                         const ChiralFermionRep& f) {
  validate_lattice(lat);
  if (cl.signature != Signature::euclidean)
    throw std::invalid_argument("lattice operators require a euclidean Clifford algebra");
  if (cl.n != lat.n) throw DimensionMismatch("Clifford algebra and lattice disagree on the dimension");
  if (md.n_f() != f.n_f() || md.n_l != f.n_l()) throw DimensionMismatch("mass data and fermion representation disagree");
}

inline std::vector<Mat> internal_connection(const TorusLattice& lat, const ChiralFermionRep& f,
                                            const std::optional<WilsonLine>& wl) {
  if (!wl) return std::vector<Mat>(lat.dim(), Mat::Zero(f.n_f(), f.n_f()));
  return wilson_connection(*wl, f.total, lat.dim());
}

}  // namespace detail

/// Components d_a + rho_F'(A_a) of the Clifford (twisted spin) connection.
inline std::vector<LatticeOperator> clifford_connection(const TorusLattice& lat, const CliffordAlgebra& cl,
                                                        const MassData& md, const ChiralFermionRep& f,
                                                        const std::optional<WilsonLine>& wl = std::nullopt) {
  detail::check_inputs(lat, cl, md, f);
  const detail::Assembly as(lat, cl, f.n_f());
  const auto a = detail::internal_connection(lat, f, wl);
  std::vector<LatticeOperator> out;
  for (int ax = 0; ax < lat.dim(); ++ax) {
    Mat m = as.derivative(site_derivative(lat, ax)) + as.fiber(as.id_spin, a[ax]);
    out.push_back(as.wrap(std::move(m), "clifford_connection[" + std::to_string(ax) + "]",
                          OperatorSymmetry::anti_hermitian));
  }
  return out;
}

/// Components d_{D,a} = d_a + rho_F'(A_a) + xi_a (gamma5 (x) D) of the canonical
/// connection of the vacuum Dirac-Yukawa operator.
inline std::vector<LatticeOperator> build_vacuum_connection(const TorusLattice& lat, const CliffordAlgebra& cl,
                                                            const MassData& md, const ChiralFermionRep& f,
                                                            const std::optional<WilsonLine>& wl = std::nullopt) {
  auto conn = clifford_connection(lat, cl, md, f, wl);
  const detail::Assembly as(lat, cl, f.n_f());
  const auto xi = canonical_xi(cl);
  for (int ax = 0; ax < lat.dim(); ++ax) {
    conn[ax].matrix += as.fiber(xi[ax] * cl.gamma5, md.D);
    conn[ax].kind = "vacuum_connection[" + std::to_string(ax) + "]";
  }
  return conn;
}

/// sum_a gamma^a (d_a + rho_F'(A_a)) + gamma5 (x) D
inline LatticeOperator build_vacuum_dirac(const TorusLattice& lat, const CliffordAlgebra& cl, const MassData& md,
                                          const ChiralFermionRep& f,
                                          const std::optional<WilsonLine>& wl = std::nullopt) {
  detail::check_inputs(lat, cl, md, f);
  const detail::Assembly as(lat, cl, f.n_f());
  const auto a = detail::internal_connection(lat, f, wl);
  const int n = as.sites * as.spin * as.internal;
  Mat m = Mat::Zero(n, n);
  for (int ax = 0; ax < lat.dim(); ++ax) {
    const Mat g = cl.gamma_upper(ax);
    m += kron(site_derivative(lat, ax), kron(g, as.id_int));
    m += as.fiber(g, a[ax]);
  }
  m += as.fiber(cl.gamma5, md.D);
  return as.wrap(std::move(m), "vacuum_dirac", OperatorSymmetry::anti_hermitian);
}

/// sum_a gamma^a conn_a
inline LatticeOperator contract_connection(const std::vector<LatticeOperator>& conn, const CliffordAlgebra& cl) {
  if (static_cast<int>(conn.size()) != cl.dim()) throw DimensionMismatch("contract_connection: wrong component count");
  Mat m = Mat::Zero(conn[0].size(), conn[0].size());
  for (int ax = 0; ax < cl.dim(); ++ax) {
    const Mat g = kron(Mat::Identity(conn[ax].sites, conn[ax].sites),
                       kron(cl.gamma_upper(ax), Mat::Identity(conn[ax].internal_dim, conn[ax].internal_dim)));
    m += g * conn[ax].matrix;
  }
  return detail::like(conn[0], std::move(m), "contracted_connection");
}

/// Delta = -sum_a conn_a conn_a (positive semidefinite for the plain derivative).
inline LatticeOperator bochner_laplacian(const std::vector<LatticeOperator>& conn) {
  if (conn.empty()) throw DimensionMismatch("bochner_laplacian: no connection components");
  Mat m = Mat::Zero(conn[0].size(), conn[0].size());
  for (const auto& c : conn) {
    detail::require_same_shape(conn[0], c, "bochner_laplacian");
    m -= c.matrix * c.matrix;
  }
  auto op = detail::like(conn[0], std::move(m), "bochner_laplacian");
  op.symmetry = OperatorSymmetry::hermitian;
  return op;
}

struct DiracPotential {
  LatticeOperator op;
  Mat site_block;                // fiber block at site 0
  double leakage = 0.0;          // largest entry outside the site-diagonal blocks
  double block_deviation = 0.0;  // max_s |block_s - block_0|
};

/// V_D = (i D)^2 - Delta. Throws NotMultiplicationOperator if V_D couples
/// different sites beyond leakage_tol.
inline DiracPotential dirac_potential(const LatticeOperator& d, const LatticeOperator& laplacian,
                                      double leakage_tol = 1e-8) {
  detail::require_same_shape(d, laplacian, "dirac_potential");
  DiracPotential out;
  out.op = detail::like(d, Mat(-d.matrix * d.matrix - laplacian.matrix), "dirac_potential");
  const int f = d.fiber_dim();
  const Mat& v = out.op.matrix;
  out.site_block = v.topLeftCorner(f, f);
  for (int s = 0; s < d.sites; ++s) {
    for (int t = 0; t < d.sites; ++t) {
      const auto blk = v.block(s * f, t * f, f, f);
      if (s == t)
        out.block_deviation = std::max(out.block_deviation, max_abs(Mat(blk - out.site_block)));
      else
        out.leakage = std::max(out.leakage, max_abs(blk));
    }
  }
  if (out.leakage > leakage_tol)
    throw NotMultiplicationOperator("Dirac potential couples distinct sites (leakage " + std::to_string(out.leakage) +
                                    "); D and the Laplacian are built from incompatible connections");
  return out;
}

struct LagrangianDensity {
  double per_site_trace = 0.0;
  double trace_imag = 0.0;
  double volume_element = 0.0;
  double density = 0.0;
  double scalar_curvature = 0.0;  // flat torus
  std::string note =
      "flat base: r_M = 0; on a curved base the density is tr(r_M/4 + m_F^2) and the field equation "
      "forces an Einstein metric (not modeled)";
};

inline LagrangianDensity lagrangian_density(const DiracPotential& vd, const TorusLattice& lat) {
  LagrangianDensity out;
  const cplx tr = vd.site_block.trace();
  out.per_site_trace = tr.real();
  out.trace_imag = tr.imag();
  out.volume_element = std::pow(lat.a, lat.dim());
  out.density = out.per_site_trace;
  return out;
}

struct CurvatureComponent {
  int a = 0, b = 0;
  LatticeOperator F;
  double norm = 0.0;  // max-abs entry
};

struct CurvatureResult {
  std::vector<CurvatureComponent> components;  // a < b
  double residual = 0.0;  // max_ab |F_ab - m_F^2 (xi_a xi_b - xi_b xi_a)|
  double max_norm = 0.0;
};

/// F_ab = [conn_a, conn_b] compared against Id_sites (x) (xi_a xi_b - xi_b xi_a) (x) m_F^2.
inline CurvatureResult relative_curvature(const std::vector<LatticeOperator>& conn, const CliffordAlgebra& cl,
                                          const MassData& md, const ChiralFermionRep& f) {
  if (static_cast<int>(conn.size()) != cl.dim()) throw DimensionMismatch("relative_curvature: wrong component count");
  if (conn[0].internal_dim != f.n_f()) throw DimensionMismatch("relative_curvature: internal dimension mismatch");
  const auto xi = canonical_xi(cl);
  const Mat m2 = md.mass_squared();
  const Mat id_sites = Mat::Identity(conn[0].sites, conn[0].sites);
  CurvatureResult out;
  for (int a = 0; a < cl.dim(); ++a) {
    for (int b = a + 1; b < cl.dim(); ++b) {
      CurvatureComponent c;
      c.a = a;
      c.b = b;
      c.F = detail::like(conn[0], commutator(conn[a].matrix, conn[b].matrix),
                         "curvature[" + std::to_string(a) + "," + std::to_string(b) + "]");
      c.norm = max_abs(c.F.matrix);
      const Mat expected = kron(id_sites, kron(Mat(xi[a] * xi[b] - xi[b] * xi[a]), m2));
      out.residual = std::max(out.residual, max_abs(Mat(c.F.matrix - expected)));
      out.max_norm = std::max(out.max_norm, c.norm);
      out.components.push_back(std::move(c));
    }
  }
  return out;
}

/// Site fields for a fluctuation of the vacuum: gauge[s][a] are generator
/// coefficients of (A - Theta)_a at site s, higgs[s] the Higgs fluctuation.
/// Either may be empty (meaning zero).
struct FluctuationField {
  std::vector<std::vector<RVec>> gauge;
  std::vector<Vec> higgs;
};

inline FluctuationField constant_higgs_fluctuation(const TorusLattice& lat, const Vec& phi) {
  FluctuationField f;
  f.higgs.assign(lat.sites(), phi);
  return f;
}

/// D_{Y,t} = vac_op + t (gamma^a (x) rho_F'(A - Theta)_a + gamma5 (x) G_Y(phi)), site-local.
/// With `unitary_gauge` set, each phi(s) is first projected onto the physical directions.
inline LatticeOperator fluctuation_operator(const LatticeOperator& vac_op, const FluctuationField& field,
                                            const YukawaMap& y, const CliffordAlgebra& cl, const ChiralFermionRep& f,
                                            double t, const GoldstoneSplit* unitary_gauge = nullptr) {
  const int ns = vac_op.sites, sd = vac_op.spinor_dim, nf = vac_op.internal_dim;
  if (sd != cl.spinor_dim() || nf != f.n_f() || y.n_f() != nf)
    throw DimensionMismatch("fluctuation_operator: operator, Clifford algebra and fermion rep disagree");
  if (!field.gauge.empty() && static_cast<int>(field.gauge.size()) != ns)
    throw DimensionMismatch("fluctuation_operator: gauge field has wrong number of sites");
  if (!field.higgs.empty() && static_cast<int>(field.higgs.size()) != ns)
    throw DimensionMismatch("fluctuation_operator: Higgs field has wrong number of sites");
  const int fd = sd * nf;
  Mat fl = Mat::Zero(vac_op.size(), vac_op.size());
  for (int s = 0; s < ns; ++s) {
    Mat blk = Mat::Zero(fd, fd);
    if (!field.gauge.empty()) {
      if (static_cast<int>(field.gauge[s].size()) != cl.dim())
        throw DimensionMismatch("fluctuation_operator: gauge field needs one component per direction");
      for (int a = 0; a < cl.dim(); ++a) blk += kron(cl.gamma_upper(a), f.total.element(field.gauge[s][a]));
    }
    if (!field.higgs.empty()) {
      const Vec phi = unitary_gauge ? unitary_gauge_project(*unitary_gauge, field.higgs[s]) : field.higgs[s];
      blk += kron(cl.gamma5, apply_yukawa(y, phi));
    }
    fl.block(s * fd, s * fd, fd, fd) = blk;
  }
  auto op = detail::like(vac_op, Mat(vac_op.matrix + t * fl), "fluctuated_dirac");
  op.symmetry = OperatorSymmetry::anti_hermitian;
  return op;
}

/// U op U^dagger with U = (+)_sites (Id_spinor (x) u_s).
inline LatticeOperator gauge_transform(const LatticeOperator& op, const std::vector<Mat>& u_site,
                                       const ChiralFermionRep& f, double unitary_tol = 1e-10) {
  if (static_cast<int>(u_site.size()) != op.sites)
    throw DimensionMismatch("gauge_transform: need one unitary per site");
  if (op.internal_dim != f.n_f()) throw DimensionMismatch("gauge_transform: internal dimension mismatch");
  const int fd = op.fiber_dim();
  Mat u = Mat::Zero(op.size(), op.size());
  const Mat id_spin = Mat::Identity(op.spinor_dim, op.spinor_dim);
  for (int s = 0; s < op.sites; ++s) {
    if (u_site[s].rows() != f.n_f() || u_site[s].cols() != f.n_f())
      throw DimensionMismatch("gauge_transform: unitary has wrong size");
    if (unitarity_defect(u_site[s]) > unitary_tol)
      throw NonUnitary("gauge_transform: transformation at site " + std::to_string(s) + " is not unitary");
    u.block(s * fd, s * fd, fd, fd) = kron(id_spin, u_site[s]);
  }
  auto out = detail::like(op, Mat(u * op.matrix * u.adjoint()), op.kind + "^u");
  out.symmetry = op.symmetry;
  return out;
}

/// Sorted real eigenvalues of i*op, or of (i*op)^2 when square_first is set.
inline std::vector<double> spectrum(const LatticeOperator& op, bool square_first, double herm_tol = 1e-10) {
  const Mat h = kI * op.matrix;
  const double scale = std::max(1.0, max_abs(h));
  if (hermiticity_defect(h) > herm_tol * scale)
    throw NonHermitian(op.kind + ": i*op is not Hermitian (defect " + std::to_string(hermiticity_defect(h)) + ")");
  Eigen::SelfAdjointEigenSolver<Mat> es(Mat(0.5 * (h + h.adjoint())), Eigen::EigenvaluesOnly);
  std::vector<double> ev(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
  if (square_first)
    for (double& e : ev) e *= e;
  std::sort(ev.begin(), ev.end());
  return ev;
}

/// Closed-form spectrum of (i D)^2 for constant mass data and no Wilson line:
/// {|kappa|^2 + m_j^2}, each with multiplicity spinor_dim.
inline std::vector<double> free_dispersion(const TorusLattice& lat, const std::vector<double>& spectrum_sq,
                                           int spinor_dim) {
  std::vector<double> out;
  for (int s = 0; s < lat.sites(); ++s) {
    double k2 = 0.0;
    for (int x : lat.coords(s)) k2 += std::pow(lat.effective_momentum(x), 2);
    for (double m2 : spectrum_sq)
      for (int r = 0; r < spinor_dim; ++r) out.push_back(k2 + m2);
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// Closed form with a flat Wilson line: per momentum, eigenvalues of the internal
/// Hermitian matrix sum_a (kappa_a - i A_a)^2 + m_F^2 (all terms commute), each
/// with multiplicity spinor_dim.
inline std::vector<double> wilson_dispersion(const TorusLattice& lat, const MassData& md,
                                             const std::vector<Mat>& connection, int spinor_dim) {
  const Mat m2 = md.mass_squared();
  const Mat id = Mat::Identity(md.n_f(), md.n_f());
  std::vector<double> out;
  for (int s = 0; s < lat.sites(); ++s) {
    const auto x = lat.coords(s);
    Mat h = m2;
    for (int a = 0; a < lat.dim(); ++a) {
      const Mat p = lat.effective_momentum(x[a]) * id - kI * connection[a];
      h += p * p;
    }
    Eigen::SelfAdjointEigenSolver<Mat> es(Mat(0.5 * (h + h.adjoint())), Eigen::EigenvaluesOnly);
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
      for (int r = 0; r < spinor_dim; ++r) out.push_back(es.eigenvalues()(i));
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace fermass
